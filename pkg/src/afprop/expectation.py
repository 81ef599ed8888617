"""Trace-preserving conditional expectations onto embedded subalgebras.

The operator caches the embedded matrix units of the lower level and applies
the orthogonal-projection formula

    E(a) = sum_l <f_l, a> / <f_l, f_l> . f_l

in the trace inner product.  Orthogonality of the cached units is verified
at construction; it is exactly what trace-consistent embeddings guarantee,
and it is the reason the formula lands in the embedded subalgebra.
"""

from __future__ import annotations

import numpy as np

from .algebra import BlockElement, FdCStar
from .errors import ValidationError
from .tower import InductiveTower, embed

ORTHOGONALITY_TOL = 1e-10


class ExpectationOperator:
    """E_n from level ``top`` of a tower onto the image of level ``level``."""

    def __init__(self, tower: InductiveTower, level: int, top: int | None = None):
        if top is None:
            top = tower.depth
        if not 0 <= level <= top <= tower.depth:
            raise ValidationError(f"need 0 <= level <= top <= {tower.depth}")
        self.tower = tower
        self.level = level
        self.top = top
        self.source = tower.levels[level]
        self.target = tower.levels[top]

        mu = tower.trace(top)
        self._factors = mu.block_factors(self.target)

        # matrix units of the lower level in (block, row, col) row-major order
        self.unit_index: list[tuple[int, int, int]] = [
            (k, j, m)
            for k, d in enumerate(self.source.block_dims)
            for j in range(d)
            for m in range(d)
        ]
        embedded = []
        for k, j, m in self.unit_index:
            blocks = [np.zeros((d, d), dtype=np.complex128) for d in self.source.block_dims]
            blocks[k][j, m] = 1.0
            e = BlockElement(self.source, tuple(blocks))
            embedded.append(embed(tower, e, level, top))
        # stacks[b][l] = block b of the l-th embedded unit
        self.stacks: list[np.ndarray] = [
            np.stack([f.blocks[b] for f in embedded])
            for b in range(self.target.n_blocks)
        ]
        gram = self._gram()
        self.nus = np.real(np.diag(gram)).copy()
        if np.any(self.nus <= 0.0):
            raise ValidationError("embedded matrix units have nonpositive trace norms")
        off = gram - np.diag(np.diag(gram))
        worst = float(np.max(np.abs(off))) if off.size else 0.0
        if worst > ORTHOGONALITY_TOL:
            raise ValidationError(
                f"embedded matrix units are not orthogonal (residual {worst:.3e}); "
                "the tower's trace weights are inconsistent with its layouts"
            )

    def _gram(self) -> np.ndarray:
        n_units = len(self.unit_index)
        gram = np.zeros((n_units, n_units), dtype=np.complex128)
        for f, stack in zip(self._factors, self.stacks):
            gram += f * np.einsum("aij,bij->ab", stack.conj(), stack)
        return gram

    # -- application ------------------------------------------------------
    def coefficients(self, a: BlockElement) -> np.ndarray:
        if a.parent != self.target:
            raise ValidationError(f"element does not live at level {self.top}")
        c = np.zeros(len(self.unit_index), dtype=np.complex128)
        for f, stack, blk in zip(self._factors, self.stacks, a.blocks):
            c += f * np.einsum("lij,ij->l", stack.conj(), blk)
        return c / self.nus

    def apply(self, a: BlockElement) -> BlockElement:
        c = self.coefficients(a)
        blocks = tuple(np.einsum("l,lij->ij", c, stack) for stack in self.stacks)
        return BlockElement(self.target, blocks)

    def apply_stack(self, blocks: list[np.ndarray]) -> list[np.ndarray]:
        """Apply to a batch: one (batch, d_b, d_b) array per target block."""
        c = np.zeros((blocks[0].shape[0], len(self.unit_index)), dtype=np.complex128)
        for f, stack, blk in zip(self._factors, self.stacks, blocks):
            c += f * np.einsum("lij,sij->sl", stack.conj(), blk)
        c /= self.nus
        return [np.einsum("sl,lij->sij", c, stack) for stack in self.stacks]

    def coefficient_element(self, a: BlockElement) -> BlockElement:
        """The level-``level`` element whose embedding is E(a)."""
        c = self.coefficients(a)
        blocks = []
        pos = 0
        for d in self.source.block_dims:
            blocks.append(c[pos : pos + d * d].reshape(d, d))
            pos += d * d
        return BlockElement(self.source, tuple(blocks))


def cond_expect(op: ExpectationOperator, a: BlockElement) -> tuple[BlockElement, BlockElement]:
    """(image at the top level, coefficient element at the lower level)."""
    return op.apply(a), op.coefficient_element(a)


def cantor_fast_expect(values, n: int) -> np.ndarray:
    """Average binary-tower function values over coordinates n..N-1.

    ``values`` has length 2^N in the block order of the binary tower (first
    coordinate most significant); the result is constant on each depth-n
    cylinder and must agree with the general projection formula under the
    uniform trace.
    """
    vals = np.asarray(values, dtype=np.complex128)
    size = vals.shape[-1]
    depth = size.bit_length() - 1
    if 1 << depth != size:
        raise ValidationError("value vector length must be a power of 2")
    if not 0 <= n <= depth:
        raise ValidationError(f"need 0 <= n <= {depth}")
    shaped = vals.reshape(vals.shape[:-1] + (1 << n, 1 << (depth - n)))
    means = shaped.mean(axis=-1, keepdims=True)
    return np.broadcast_to(means, shaped.shape).reshape(vals.shape).copy()
