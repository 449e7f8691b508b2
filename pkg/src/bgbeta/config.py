"""Run configuration with flag > environment (BGB_*) > default precedence."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_SEED = 42
DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_DEGREE = 40
DEFAULT_THREADS = 1
DEFAULT_OUTPUT_FORMAT = "json"


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    rel_tol: float = DEFAULT_REL_TOL
    max_degree: int = DEFAULT_MAX_DEGREE
    threads: int = DEFAULT_THREADS
    output_format: str = DEFAULT_OUTPUT_FORMAT


def _env(name, cast, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    return cast(raw)


def from_env() -> RunConfig:
    return RunConfig(
        seed=_env("BGB_SEED", int, DEFAULT_SEED),
        rel_tol=_env("BGB_REL_TOL", float, DEFAULT_REL_TOL),
        max_degree=_env("BGB_MAX_DEGREE", int, DEFAULT_MAX_DEGREE),
        threads=_env("BGB_THREADS", int, DEFAULT_THREADS),
        output_format=_env("BGB_OUTPUT_FORMAT", str, DEFAULT_OUTPUT_FORMAT),
    )


def resolve(seed=None, rel_tol=None, max_degree=None, threads=None, output_format=None) -> RunConfig:
    """Apply explicit flags on top of the environment-derived config."""
    base = from_env()
    return RunConfig(
        seed=base.seed if seed is None else seed,
        rel_tol=base.rel_tol if rel_tol is None else rel_tol,
        max_degree=base.max_degree if max_degree is None else max_degree,
        threads=base.threads if threads is None else threads,
        output_format=base.output_format if output_format is None else output_format,
    )
