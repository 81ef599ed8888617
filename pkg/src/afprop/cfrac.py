"""Exact-integer continued fractions and the sequence-space ultrametric.

Convergents are kept as Python big integers so the determinant identity
p_n q_{n-1} - p_{n-1} q_n = (-1)^{n-1} holds exactly at any depth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import PrecisionError, UndeterminedDistanceError, ValidationError

DEFAULT_GUARD = 1e-12


@dataclass(frozen=True)
class CfExpansion:
    """Digits r_1..r_N (r_0 = 0 implicit) with convergents (p_n, q_n), n = 0..N."""

    digits: tuple[int, ...]
    p: tuple[int, ...]
    q: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.digits)

    def convergent(self, n: int) -> Fraction:
        return Fraction(self.p[n], self.q[n])

    def determinant(self, n: int) -> int:
        """p_n q_{n-1} - p_{n-1} q_n, exactly."""
        return self.p[n] * self.q[n - 1] - self.p[n - 1] * self.q[n]


def convergents(digits: Sequence[int]) -> CfExpansion:
    """Run the (p, q) recursion over the digits, in exact integers."""
    digits = tuple(int(r) for r in digits)
    if not digits:
        raise ValidationError("at least one continued-fraction digit is required")
    if any(r < 1 for r in digits):
        raise ValidationError("continued-fraction digits must all be >= 1")
    p = [0, 1]
    q = [1, digits[0]]
    for r in digits[1:]:
        p.append(r * p[-1] + p[-2])
        q.append(r * q[-1] + q[-2])
    return CfExpansion(digits, tuple(p), tuple(q))


def cf_expand(theta: float, depth: int, guard: float = DEFAULT_GUARD) -> tuple[int, ...]:
    """Digits of theta in (0,1) by the Gauss map, with a remainder guard.

    Floats are rational, so the map is only trusted while the running
    remainder stays above ``guard``; below it the requested depth cannot be
    certified and a PrecisionError is raised.
    """
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise ValidationError(f"theta must lie in (0,1), got {theta!r}")
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    digits = []
    x = theta
    for _ in range(depth):
        if x <= guard:
            raise PrecisionError(
                f"remainder {x:.3e} fell below the guard {guard:g}; "
                "theta is too close to a rational for the requested depth"
            )
        inv = 1.0 / x
        r = int(math.floor(inv))
        digits.append(r)
        x = inv - r
    exp = convergents(digits)
    ftheta = Fraction(theta)
    for n in range(1, depth + 1):
        if abs(ftheta - exp.convergent(n)) >= Fraction(1, exp.q[n] ** 2):
            raise PrecisionError(
                f"convergent {n} misses |theta - p/q| < 1/q^2; "
                "increase the guard or reduce the depth"
            )
    return tuple(digits)


def bracket_check(exp: CfExpansion, theta: float) -> bool:
    """Alternating enclosure p_2n/q_2n < theta < p_2n+1/q_2n+1, exactly."""
    ftheta = Fraction(theta)
    for n in range(exp.depth + 1):
        c = exp.convergent(n)
        if n % 2 == 0:
            if not c < ftheta:
                return False
        else:
            if not ftheta < c:
                return False
    return True


def first_disagreement(x: Sequence[int], y: Sequence[int]) -> Optional[int]:
    """Index of the first differing entry over the common span, None if equal."""
    for i, (a, b) in enumerate(zip(x, y)):
        if a != b:
            return i
    return None


def baire_distance(x: Sequence[int], y: Sequence[int]) -> float:
    """2^(-first disagreement); 0 when equal over the full (equal-length) span.

    Equal prefixes of different lengths cannot witness either equality or a
    disagreement, so they raise UndeterminedDistanceError carrying the bound
    2^(-span) from the witnessed span.
    """
    i = first_disagreement(x, y)
    if i is not None:
        return 2.0 ** (-i)
    if len(x) == len(y):
        return 0.0
    raise UndeterminedDistanceError(min(len(x), len(y)))


@dataclass(frozen=True)
class BaireBox:
    """Componentwise digit constraints lower(n) <= r_n <= upper(n).

    ``upper`` entries of None are unbounded.  Beyond the described prefix the
    tail rule applies: "repeat-last" keeps the final pair, "unbounded" drops
    the upper constraint.
    """

    lower: tuple[int, ...]
    upper: tuple[Optional[int], ...]
    tail: str = "repeat-last"

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValidationError("lower and upper must have the same described length")
        if self.tail not in ("repeat-last", "unbounded"):
            raise ValidationError(f"unknown tail rule {self.tail!r}")
        for lo, up in zip(self.lower, self.upper):
            if lo < 1:
                raise ValidationError("lower bounds must be >= 1")
            if up is not None and up < lo:
                raise ValidationError(f"upper bound {up} below lower bound {lo}")


def box_predicates(box: BaireBox) -> dict:
    """Boxes are always closed; totally bounded iff every level stays finite."""
    finite_prefix = all(u is not None for u in box.upper)
    if box.tail == "repeat-last":
        tail_bounded = len(box.upper) == 0 or box.upper[-1] is not None
    else:
        tail_bounded = False
    return {"closed": True, "totally_bounded": finite_prefix and tail_bounded}
