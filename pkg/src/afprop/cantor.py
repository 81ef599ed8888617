"""Binary-sequence ultrametric oracle and the coordinate unitaries.

The closed form 2 beta(first disagreement) is the exactly checkable value
for the transport distance between point evaluations on the binary tower,
so this module doubles as the end-to-end validator for the LP pipeline.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .algebra import BlockElement, point_state
from .errors import UndeterminedDistanceError, ValidationError
from .lipnorm import LipData
from .mk import mk_abelian
from .tower import BetaSequence, InductiveTower


def parse_bits(text: str) -> tuple[int, ...]:
    if not text or any(ch not in "01" for ch in text):
        raise ValidationError(f"point must be a nonempty 0/1 string, got {text!r}")
    return tuple(int(ch) for ch in text)


def _check_bits(x: Sequence[int]) -> tuple[int, ...]:
    bits = tuple(int(b) for b in x)
    if any(b not in (0, 1) for b in bits):
        raise ValidationError("point coordinates must be 0 or 1")
    return bits


def block_index(bits: Sequence[int]) -> int:
    """Tower block holding the point: first coordinate most significant."""
    idx = 0
    for b in _check_bits(bits):
        idx = (idx << 1) | b
    return idx


def cantor_oracle(x: Sequence[int], y: Sequence[int], beta: BetaSequence) -> float:
    """2 beta(min{n : x_n != y_n}); 0 when equal over the full common span.

    Needs a decreasing beta (the hypothesis of the exact formula).  Equal
    prefixes of different lengths leave the distance undetermined and raise,
    mirroring the sequence-space semantics.
    """
    beta.require_decreasing()
    x, y = _check_bits(x), _check_bits(y)
    for i, (a, b) in enumerate(zip(x, y)):
        if a != b:
            if i >= len(beta):
                raise ValidationError("beta sequence too short for the disagreement index")
            return 2.0 * beta[i]
    if len(x) == len(y):
        return 0.0
    raise UndeterminedDistanceError(min(len(x), len(y)))


def u_element(tower: InductiveTower, n: int, level: int | None = None) -> BlockElement:
    """The +-1 coordinate function 2 eta_n - 1 at the requested level."""
    if level is None:
        level = tower.depth
    if not tower.is_abelian:
        raise ValidationError("coordinate unitaries need the binary tower")
    if not 0 <= n < level <= tower.depth:
        raise ValidationError(f"need 0 <= n < level <= {tower.depth}")
    parent = tower.levels[level]
    blocks = []
    for idx in range(parent.n_blocks):
        bit = (idx >> (level - 1 - n)) & 1
        blocks.append(np.array([[2.0 * bit - 1.0]], dtype=np.complex128))
    return BlockElement(parent, tuple(blocks))


def verify_mk_vs_oracle(
    lip_data: LipData,
    x: Sequence[int],
    y: Sequence[int],
    tol: float = 1e-7,
) -> dict:
    """Solve the transport LP on point evaluations and compare to the formula."""
    parent = lip_data.algebra
    x, y = _check_bits(x), _check_bits(y)
    if len(x) < lip_data.level or len(y) < lip_data.level:
        raise ValidationError(f"points need at least {lip_data.level} coordinates")
    phi = point_state(parent, block_index(x[: lip_data.level]))
    psi = point_state(parent, block_index(y[: lip_data.level]))
    lp = mk_abelian(lip_data, phi, psi)
    oracle = cantor_oracle(x, y, lip_data.beta)
    gap = abs(lp.value - oracle)
    return {
        "mk": lp.value,
        "oracle": oracle,
        "gap": gap,
        "iterations": lp.iterations,
        "ok": bool(gap <= tol),
    }
