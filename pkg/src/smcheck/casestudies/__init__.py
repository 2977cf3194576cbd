"""Built-in case studies and the registry the CLI and services look models up in."""

from collections.abc import Callable, Mapping
from typing import Any

from pydantic import BaseModel, ValidationError

from smcheck.casestudies.base import (
    ModelError,
    ModelInstance,
    ModelSpec,
    attribute,
    merge_bindings,
    probe,
    to_ticks,
)
from smcheck.casestudies.ecs import EcsParams, build_ecs, dependability_queries
from smcheck.casestudies.fifo import FifoParams, build_fifo
from smcheck.casestudies.scheduler import (
    ScriptedChooser,
    SchedParams,
    build_sched_example,
    enumerate_orders,
    order_count,
    run_order,
)

# name -> (parameter model, builder taking validated parameters)
MODELS: dict[str, tuple[type[BaseModel], Callable[[Any], ModelSpec]]] = {
    "fifo": (FifoParams, build_fifo),
    "ecs": (EcsParams, build_ecs),
    "sched": (SchedParams, lambda p: build_sched_example(p.example)),
}


def available_models() -> list[str]:
    return sorted(MODELS)


def build_model(name: str, overrides: Mapping[str, Any] | None = None) -> ModelSpec:
    """
    Build a registered model with parameter overrides.

    Args:
        name: Registered model name
        overrides: Parameter values replacing the defaults (strings are coerced)

    Returns:
        Model specification

    Raises:
        ModelError: If the model is unknown or a parameter is invalid
    """
    try:
        params_type, builder = MODELS[name]
    except KeyError:
        raise ModelError(f"unknown model {name!r}; available: {', '.join(available_models())}") from None

    overrides = dict(overrides or {})
    unknown = sorted(set(overrides) - set(params_type.model_fields))
    if unknown:
        raise ModelError(f"model {name!r} has no parameter(s): {', '.join(unknown)}")
    try:
        params = params_type.model_validate(overrides)
    except ValidationError as e:
        raise ModelError(f"invalid parameters for model {name!r}: {e}") from e
    return builder(params)


__all__ = [
    "MODELS",
    "EcsParams",
    "FifoParams",
    "ModelError",
    "ModelInstance",
    "ModelSpec",
    "SchedParams",
    "ScriptedChooser",
    "attribute",
    "available_models",
    "build_ecs",
    "build_fifo",
    "build_model",
    "build_sched_example",
    "dependability_queries",
    "enumerate_orders",
    "merge_bindings",
    "order_count",
    "probe",
    "run_order",
    "to_ticks",
]
