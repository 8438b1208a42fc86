"""Tabulated integrands, read as their piecewise-linear interpolant.

The interpolant's secant slopes all lie between the smallest and largest
segment slope, so its slope bounds are exact rather than estimated.
"""

from __future__ import annotations

import bisect
import csv
import math
from pathlib import Path

from .core import Interval, SlopeBounds
from .errors import DomainError


class PiecewiseLinear:
    def __init__(self, ts, ys):
        ts = [float(t) for t in ts]
        ys = [float(y) for y in ys]
        if len(ts) != len(ys):
            raise DomainError("table columns differ in length")
        if len(ts) < 2:
            raise DomainError("a table needs at least 2 rows")
        if not all(math.isfinite(v) for v in ts + ys):
            raise DomainError("table entries must be finite")
        for i in range(len(ts) - 1):
            if not ts[i] < ts[i + 1]:
                raise DomainError(f"table t column must be strictly increasing (row {i + 1})")
        self.ts = ts
        self.ys = ys

    @classmethod
    def read_csv(cls, path: str | Path) -> PiecewiseLinear:
        """Two columns ``t,f``; a non-numeric first row is taken as a header."""
        ts, ys = [], []
        with open(path, newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != 2:
                    raise DomainError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
                try:
                    t, y = float(row[0]), float(row[1])
                except ValueError:
                    if lineno == 1:
                        continue
                    raise DomainError(f"{path}:{lineno}: non-numeric entry {row!r}") from None
                ts.append(t)
                ys.append(y)
        return cls(ts, ys)

    @property
    def interval(self) -> Interval:
        return Interval(self.ts[0], self.ts[-1])

    def __call__(self, t: float) -> float:
        t = float(t)
        ts, ys = self.ts, self.ys
        if not ts[0] <= t <= ts[-1]:
            raise DomainError(f"t={t!r} outside table range [{ts[0]!r}, {ts[-1]!r}]")
        i = bisect.bisect_right(ts, t) - 1
        if i >= len(ts) - 1:
            return ys[-1]
        if t == ts[i]:
            return ys[i]
        w = (t - ts[i]) / (ts[i + 1] - ts[i])
        return ys[i] + w * (ys[i + 1] - ys[i])

    def segment_slopes(self) -> list[float]:
        return [(self.ys[i + 1] - self.ys[i]) / (self.ts[i + 1] - self.ts[i]) for i in range(len(self.ts) - 1)]

    def slope_bounds(self, iv: Interval | None = None) -> SlopeBounds:
        """Exact slope envelope over the segments meeting ``iv`` (default: whole table)."""
        slopes = self.segment_slopes()
        if iv is not None and not iv.degenerate:
            slopes = [s for i, s in enumerate(slopes) if self.ts[i] < iv.b and self.ts[i + 1] > iv.a]
        return SlopeBounds(min(slopes), max(slopes))
