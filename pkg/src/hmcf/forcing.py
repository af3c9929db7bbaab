"""Bounded continuous forcing coefficients c(t)."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import InvalidInputError


@dataclass(frozen=True, eq=False)
class ForcingSchedule:
    """Forcing coefficient as a sample table.

    A constant is stored as a single sample. Tables are interpolated
    linearly and extrapolated as constants, so ``__call__`` is defined and
    bounded for every t >= 0.
    """

    times: np.ndarray
    values: np.ndarray
    kind: str = "table"
    bound: float = field(init=False)

    def __post_init__(self):
        ts = np.array(self.times, dtype=float).ravel()
        cs = np.array(self.values, dtype=float).ravel()
        if ts.size == 0 or ts.size != cs.size:
            raise InvalidInputError("forcing table needs matching, non-empty time and value columns")
        if not (np.all(np.isfinite(ts)) and np.all(np.isfinite(cs))):
            raise InvalidInputError("forcing table contains non-finite entries")
        if ts.size > 1 and np.any(np.diff(ts) <= 0):
            raise InvalidInputError("forcing table times must be strictly increasing")
        ts.setflags(write=False)
        cs.setflags(write=False)
        object.__setattr__(self, "times", ts)
        object.__setattr__(self, "values", cs)
        object.__setattr__(self, "bound", float(np.max(np.abs(cs))))

    @classmethod
    def constant(cls, c: float) -> "ForcingSchedule":
        return cls(np.array([0.0]), np.array([float(c)]), kind="const")

    @classmethod
    def table(cls, times, values) -> "ForcingSchedule":
        return cls(np.asarray(times, dtype=float), np.asarray(values, dtype=float), kind="table")

    @classmethod
    def from_csv(cls, path) -> "ForcingSchedule":
        """Read a two-column ``t,c`` CSV (an optional header row is skipped)."""
        ts, cs = [], []
        with open(Path(path), newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    t, c = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    if not ts:
                        continue  # header
                    raise InvalidInputError(f"bad forcing row {row!r} in {path}")
                ts.append(t)
                cs.append(c)
        return cls.table(ts, cs)

    def __call__(self, t: float) -> float:
        return float(_kernels.interp_forcing(float(t), self.times, self.values))

    @property
    def is_nonpositive(self) -> bool:
        return bool(np.all(self.values <= 0.0))

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.values == 0.0))

    def __eq__(self, other):
        if not isinstance(other, ForcingSchedule):
            return NotImplemented
        return (self.times.shape == other.times.shape
                and np.array_equal(self.times, other.times)
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.times.tobytes(), self.values.tobytes()))

    def describe(self) -> str:
        if self.kind == "const":
            return f"const:{self.values[0]!r}"
        return f"table:{self.times.size} samples"
