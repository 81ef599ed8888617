"""Seminorms of the form  max_n ||a - E_n(a)|| / beta(n)  on a tower's top level.

On elements of the top level the supremum over all levels collapses to a
finite maximum: conditional expectations onto levels at or above the element
fix it.  The seminorm is defined on self-adjoint elements only; complex
input is rejected rather than split.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    BlockElement,
    cstar_norm,
    require_selfadjoint,
)
from .errors import ValidationError
from .expectation import ExpectationOperator
from .tower import BetaSequence, InductiveTower

KERNEL_SNAP = 1e-12


class LipData:
    """A tower, a positive weight sequence and a top level, with cached projections."""

    def __init__(self, tower: InductiveTower, beta: BetaSequence, level: int | None = None):
        if level is None:
            level = tower.depth
        if not 0 <= level <= tower.depth:
            raise ValidationError(f"level must be in 0..{tower.depth}")
        if len(beta) < level + 1:
            raise ValidationError(f"beta needs at least {level + 1} entries")
        self.tower = tower
        self.beta = beta
        self.level = level
        self._ops: dict[int, ExpectationOperator] = {}

    @property
    def algebra(self):
        return self.tower.levels[self.level]

    def expectation(self, n: int) -> ExpectationOperator:
        if n not in self._ops:
            self._ops[n] = ExpectationOperator(self.tower, n, self.level)
        return self._ops[n]


def lip(data: LipData, a: BlockElement) -> float:
    """max over n <= top of ||a - E_n(a)|| / beta(n) for self-adjoint a.

    Residuals below 1e-12 relative are snapped to zero so real multiples of
    the unit have seminorm exactly 0.
    """
    if a.parent != data.algebra:
        raise ValidationError(f"element does not live at level {data.level}")
    require_selfadjoint(a)
    snap = KERNEL_SNAP * (1.0 + cstar_norm(a))
    best = 0.0
    for n in range(data.level):
        r = cstar_norm(a - data.expectation(n).apply(a))
        if r <= snap:
            r = 0.0
        best = max(best, r / data.beta[n])
    return best


def lip_batch(data: LipData, stacks: list[np.ndarray]) -> np.ndarray:
    """Seminorm of a batch of self-adjoint elements, one (S, d, d) array per block.

    Same values as ``lip`` element by element, including the kernel snap;
    callers are responsible for the self-adjointness of the batch.
    """
    s_count = stacks[0].shape[0]
    norms = np.zeros(s_count)
    from .linalg import batched_hermitian_opnorms

    for blk in stacks:
        np.maximum(norms, batched_hermitian_opnorms(blk), out=norms)
    snap = KERNEL_SNAP * (1.0 + norms)
    out = np.zeros(s_count)
    for n in range(data.level):
        op = data.expectation(n)
        images = op.apply_stack(stacks)
        level_norm = np.zeros(s_count)
        for blk, img in zip(stacks, images):
            np.maximum(level_norm, batched_hermitian_opnorms(blk - img), out=level_norm)
        level_norm[level_norm <= snap] = 0.0
        np.maximum(out, level_norm / data.beta[n], out=out)
    return out


def quasi_leibniz_margin(data: LipData, a: BlockElement, b: BlockElement) -> tuple[float, float]:
    """Margins 2(||a|| L(b) + ||b|| L(a)) - L(product) for the two products.

    Both must come out >= 0 (up to roundoff) for a (2,0)-quasi-Leibniz
    seminorm; the symmetrized and antisymmetrized products of self-adjoint
    elements stay self-adjoint, so both sides are defined.
    """
    from .algebra import jordan, lie

    require_selfadjoint(a)
    require_selfadjoint(b)
    la, lb = lip(data, a), lip(data, b)
    na, nb = cstar_norm(a), cstar_norm(b)
    bound = 2.0 * (na * lb + nb * la)
    return bound - lip(data, jordan(a, b)), bound - lip(data, lie(a, b))


def lip_lipschitz_constant(data: LipData) -> float:
    """K with |L(a) - L(b)| <= K ||a - b||, from the norm-1 projections.

    Each term of the seminorm moves by at most 2||a - b|| / beta(n), so
    K = 2 / min beta over the levels in play.
    """
    return 2.0 / min(data.beta.values[: data.level + 1])
