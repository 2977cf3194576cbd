"""MAG-style configuration file format."""
