"""Working-precision control for the mpmath-backed numeric routines."""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator

from mpmath import mp

ENV_VAR = "CUTSEQ_PRECISION"
DEFAULT_DPS = 200


def configured_dps() -> int:
    """Decimal precision requested via the environment, else the default."""
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_DPS
    try:
        dps = int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_VAR} must be an integer, got {raw!r}") from exc
    if dps < 15:
        raise ValueError(f"{ENV_VAR} must be at least 15, got {dps}")
    return dps


@contextmanager
def working_precision(dps: int | None = None) -> Iterator[None]:
    """Temporarily set mpmath's decimal precision, restoring it afterwards."""
    saved = mp.dps
    mp.dps = configured_dps() if dps is None else dps
    try:
        yield
    finally:
        mp.dps = saved
