"""Allow running smcheck as a module: python -m smcheck"""

from smcheck.cli.main import cli

if __name__ == "__main__":
    cli()
