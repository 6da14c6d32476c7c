"""Decimal working precision shared by the mpmath evaluators."""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator

import mpmath

DEFAULT_DIGITS = 50
ENV_VAR = "PERIODA_PRECISION"


def digits() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return DEFAULT_DIGITS
    value = int(raw)
    if value < 15:
        raise ValueError(f"{ENV_VAR} must be at least 15, got {value}")
    return value


@contextmanager
def working_precision() -> Iterator[None]:
    with mpmath.workdps(digits()):
        yield
