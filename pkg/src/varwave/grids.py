"""Rectangular regions and tensor grids over two coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidityError


@dataclass(frozen=True)
class Region:
    """Open box ``lo[0] < a < hi[0]``, ``lo[1] < b < hi[1]`` in named coordinates."""

    names: tuple[str, str] = ("x", "t")
    lo: tuple[float, float] = (-math.inf, -math.inf)
    hi: tuple[float, float] = (math.inf, math.inf)

    def contains(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        return (a > self.lo[0]) & (a < self.hi[0]) & (b > self.lo[1]) & (b < self.hi[1])

    def require(self, a, b, what: str = "point"):
        ok = self.contains(a, b)
        if not np.all(ok):
            raise ValidityError(f"{what} outside validity region {self.describe_text()}")

    def intersect(self, other: "Region") -> "Region":
        return Region(self.names,
                      (max(self.lo[0], other.lo[0]), max(self.lo[1], other.lo[1])),
                      (min(self.hi[0], other.hi[0]), min(self.hi[1], other.hi[1])))

    def describe(self) -> dict:
        def fin(v):
            return None if math.isinf(v) else v
        return {name: [fin(l), fin(h)] for name, l, h in zip(self.names, self.lo, self.hi)}

    def describe_text(self) -> str:
        parts = []
        for name, l, h in zip(self.names, self.lo, self.hi):
            if math.isinf(l) and math.isinf(h):
                continue
            if math.isinf(l):
                parts.append(f"{name}<{h:g}")
            elif math.isinf(h):
                parts.append(f"{name}>{l:g}")
            else:
                parts.append(f"{l:g}<{name}<{h:g}")
        return ", ".join(parts) or "everywhere"


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n: int
    spacing: str = "lin"

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"axis {self.name}: need lo < hi, got {self.lo} and {self.hi}")
        if self.n < 1:
            raise ValueError(f"axis {self.name}: need at least one point")
        if self.spacing not in ("lin", "log"):
            raise ValueError(f"axis {self.name}: spacing must be lin or log")
        if self.spacing == "log" and self.lo <= 0:
            raise ValueError(f"axis {self.name}: log spacing needs a positive range")

    def points(self) -> np.ndarray:
        if self.n == 1:
            return np.array([0.5 * (self.lo + self.hi)])
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.n)
        return np.linspace(self.lo, self.hi, self.n)

    def text(self) -> str:
        s = f"{self.name}:{self.lo!r}:{self.hi!r}:{self.n}"
        return s + ":log" if self.spacing == "log" else s


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid ``first x second``; text form ``x:a:b:n,t:a:b:n[:log]``."""

    first: Axis
    second: Axis

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise ValueError(f"grid spec needs two comma-separated axes, got {text!r}")
        axes = []
        for p in parts:
            fields = p.split(":")
            if len(fields) not in (4, 5):
                raise ValueError(f"axis spec {p!r} must be name:a:b:n[:log]")
            spacing = fields[4] if len(fields) == 5 else "lin"
            try:
                axes.append(Axis(fields[0], float(fields[1]), float(fields[2]), int(fields[3]), spacing))
            except ValueError as exc:
                raise ValueError(f"axis spec {p!r}: {exc}") from None
        return cls(*axes)

    @classmethod
    def box(cls, names, lo, hi, n, spacing=("lin", "lin")) -> "GridSpec":
        n = (n, n) if isinstance(n, int) else n
        return cls(Axis(names[0], lo[0], hi[0], n[0], spacing[0]),
                   Axis(names[1], lo[1], hi[1], n[1], spacing[1]))

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays of shape (n_first, n_second)."""
        return np.meshgrid(self.first.points(), self.second.points(), indexing="ij")

    def text(self) -> str:
        return f"{self.first.text()},{self.second.text()}"

    @property
    def shape(self):
        return (self.first.n, self.second.n)
