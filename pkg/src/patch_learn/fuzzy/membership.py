"""
Trapezoidal membership functions
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.exceptions import ContractViolation

Number = Union[float, np.ndarray]


@dataclass(frozen=True)
class TrapezoidalMf:
    """Trapezoid with left foot a, left shoulder b, right shoulder c, right foot d.

    Membership is 1 on the closed plateau [b, c], linear on the open edges
    (a, b) and (c, d), and 0 elsewhere. A vertical edge (a == b or c == d)
    therefore has membership 1 at the breakpoint itself.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not self.a <= self.b <= self.c <= self.d:
            raise ContractViolation(
                f"Trapezoid breakpoints must satisfy a <= b <= c <= d, got "
                f"({self.a!r}, {self.b!r}, {self.c!r}, {self.d!r})"
            )

    @property
    def params(self) -> Tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def membership(self, x: Number) -> Number:
        """Evaluate the membership grade at x (scalar or array)"""
        values = np.asarray(x, dtype=float)
        mu = np.zeros_like(values)

        if self.b > self.a:
            rising = (values > self.a) & (values < self.b)
            mu = np.where(rising, (values - self.a) / (self.b - self.a), mu)
        if self.d > self.c:
            falling = (values > self.c) & (values < self.d)
            mu = np.where(falling, (self.d - values) / (self.d - self.c), mu)
        mu = np.where((values >= self.b) & (values <= self.c), 1.0, mu)

        if mu.ndim == 0:
            return float(mu)
        return mu


def mf_membership(mf: TrapezoidalMf, x: float) -> float:
    """Membership grade of x in mf"""
    return float(mf.membership(float(x)))


def membership_matrix(mfs: Sequence[TrapezoidalMf], x: np.ndarray) -> np.ndarray:
    """Grades of every x (N,) in every MF, shape (N, len(mfs))"""
    x = np.asarray(x, dtype=float)
    return np.column_stack([mf.membership(x) for mf in mfs])


def fired_set(mfs: Sequence[TrapezoidalMf], x: float) -> Tuple[int, ...]:
    """Indices of the MFs with positive membership at x"""
    return tuple(i for i, mf in enumerate(mfs) if mf.membership(x) > 0.0)


def coverage_gap(
    mfs: Sequence[TrapezoidalMf], lo: float, hi: float
) -> Optional[Tuple[float, float]]:
    """First sub-interval of [lo, hi] where no MF fires, or None when covered.

    Grades are piecewise linear with kinks only at breakpoints, so it is
    enough to probe every breakpoint inside the range and the midpoint of
    every pair of consecutive breakpoints.
    """
    points = sorted(
        {lo, hi} | {p for mf in mfs for p in mf.params if lo < p < hi}
    )
    for p in points:
        if not fired_set(mfs, p):
            return (p, p)
    for left, right in zip(points[:-1], points[1:]):
        if not fired_set(mfs, 0.5 * (left + right)):
            return (left, right)
    return None


def uniform_trapezoids(lo: float, hi: float, count: int) -> List[TrapezoidalMf]:
    """Lay out `count` overlapping trapezoids over [lo, hi].

    The range is cut into 2*count - 1 equal segments that alternate between
    plateaus and transitions, so adjacent supports overlap by one segment
    and the outermost shoulders sit on the range ends.
    """
    if count < 1:
        raise ContractViolation("need at least one membership function")
    if count == 1:
        return [TrapezoidalMf(lo, lo, hi, hi)]

    segment = (hi - lo) / (2 * count - 1)
    edges = [lo + i * segment for i in range(2 * count)]
    edges[-1] = hi

    mfs = []
    for i in range(count):
        b = edges[2 * i]
        c = edges[2 * i + 1]
        a = edges[2 * i - 1] if i > 0 else lo
        d = edges[2 * i + 2] if i < count - 1 else hi
        mfs.append(TrapezoidalMf(a, b, c, d))
    return mfs
