"""Run configuration: working precision and reproducibility knobs."""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass, field

MIN_PRECISION = 64


def _env_precision() -> int:
    raw = os.environ.get("OTKIT_PRECISION", "")
    try:
        bits = int(raw)
    except ValueError:
        return 192
    return max(MIN_PRECISION, bits)


DEFAULT_PRECISION = _env_precision()

_prec_stack = [DEFAULT_PRECISION]


def working_precision() -> int:
    """Current working precision in bits."""
    return _prec_stack[-1]


@contextmanager
def precision(bits: int):
    """Temporarily override the working precision."""
    if bits < MIN_PRECISION:
        raise ValueError(f"precision must be >= {MIN_PRECISION} bits, got {bits}")
    _prec_stack.append(int(bits))
    try:
        yield
    finally:
        _prec_stack.pop()


class PrecisionError(ArithmeticError):
    """A decision could not be made even after escalating precision."""


def decide(compute, max_bits: int = 1 << 14):
    """Evaluate ``compute()`` at increasing precision until it returns non-None.

    ``compute`` must return None exactly when the current precision is
    insufficient to decide its answer.
    """
    bits = working_precision()
    while bits <= max_bits:
        with precision(bits):
            out = compute()
        if out is not None:
            return out
        bits *= 2
    raise PrecisionError(f"undecidable even at {max_bits} bits")


@dataclass(frozen=True)
class RunConfig:
    """Reproducible knob set shared by the CLI commands."""

    precision_bits: int = field(default_factory=lambda: DEFAULT_PRECISION)
    unit_search_bound: int = 12
    mc_samples: int = 1_000_000
    seed: int = 0
    output_format: str = "text"
    certified_only: bool = False

    def __post_init__(self):
        if self.precision_bits < MIN_PRECISION:
            raise ValueError(f"precision_bits must be >= {MIN_PRECISION}")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    def validate_mc(self):
        if self.mc_samples < 1000:
            raise ValueError("Monte Carlo runs need at least 10^3 samples")
