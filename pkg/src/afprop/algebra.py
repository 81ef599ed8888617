"""Finite-dimensional C*-algebras as direct sums of full matrix blocks.

Elements are tuples of complex blocks; tracial states are positive weight
vectors against normalized block traces; states are block density matrices
paired through the unnormalized trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import SelfAdjointnessError, ValidationError
from .linalg import as_matrix, eigvals_hermitian, frobenius, operator_norm

SA_TOL = 1e-12


@dataclass(frozen=True)
class FdCStar:
    """Direct sum of full matrix algebras, given by its block dimensions."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.block_dims) == 0:
            raise ValidationError("an algebra needs at least one block")
        if any((not isinstance(d, int)) or d < 1 for d in self.block_dims):
            raise ValidationError(f"block dimensions must be integers >= 1: {self.block_dims}")

    @property
    def n_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def total_dim(self) -> int:
        return sum(d * d for d in self.block_dims)

    def __repr__(self):
        return f"FdCStar{self.block_dims}"


def _freeze(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class BlockElement:
    """One complex matrix per block of the parent algebra."""

    parent: FdCStar
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.blocks) != self.parent.n_blocks:
            raise ValidationError(
                f"expected {self.parent.n_blocks} blocks, got {len(self.blocks)}"
            )
        coerced = []
        for d, b in zip(self.parent.block_dims, self.blocks):
            m = as_matrix(b)
            if m.shape != (d, d):
                raise ValidationError(f"block of shape {m.shape} does not match dim {d}")
            coerced.append(_freeze(m.copy()))
        object.__setattr__(self, "blocks", tuple(coerced))

    # -- arithmetic -------------------------------------------------------
    def _same_parent(self, other: "BlockElement"):
        if self.parent != other.parent:
            raise ValidationError("elements live in different algebras")

    def __add__(self, other: "BlockElement") -> "BlockElement":
        self._same_parent(other)
        return BlockElement(self.parent, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: "BlockElement") -> "BlockElement":
        self._same_parent(other)
        return BlockElement(self.parent, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __neg__(self) -> "BlockElement":
        return BlockElement(self.parent, tuple(-a for a in self.blocks))


def add(a: BlockElement, b: BlockElement) -> BlockElement:
    return a + b


def mul(a: BlockElement, b: BlockElement) -> BlockElement:
    a._same_parent(b)
    return BlockElement(a.parent, tuple(x @ y for x, y in zip(a.blocks, b.blocks)))


def adjoint(a: BlockElement) -> BlockElement:
    return BlockElement(a.parent, tuple(x.conj().T for x in a.blocks))


def scale(t: complex, a: BlockElement) -> BlockElement:
    return BlockElement(a.parent, tuple(t * x for x in a.blocks))


def unit(parent: FdCStar) -> BlockElement:
    return BlockElement(parent, tuple(np.eye(d, dtype=np.complex128) for d in parent.block_dims))


def zero(parent: FdCStar) -> BlockElement:
    return BlockElement(
        parent, tuple(np.zeros((d, d), dtype=np.complex128) for d in parent.block_dims)
    )


def matrix_unit(parent: FdCStar, k: int, j: int, m: int) -> BlockElement:
    """e_{k,j,m}: the (j, m) unit of block k, zero elsewhere (0-based indices)."""
    blocks = [np.zeros((d, d), dtype=np.complex128) for d in parent.block_dims]
    blocks[k][j, m] = 1.0
    return BlockElement(parent, tuple(blocks))


def jordan(a: BlockElement, b: BlockElement) -> BlockElement:
    """(ab + ba) / 2; self-adjoint when both arguments are."""
    return scale(0.5, mul(a, b) + mul(b, a))


def lie(a: BlockElement, b: BlockElement) -> BlockElement:
    """(ab - ba) / 2i; self-adjoint when both arguments are."""
    return scale(1.0 / 2.0j, mul(a, b) - mul(b, a))


def cstar_norm(a: BlockElement) -> float:
    return max(operator_norm(b) for b in a.blocks)


def is_selfadjoint(a: BlockElement, tol: float = SA_TOL) -> bool:
    return all(
        frobenius(b - b.conj().T) <= tol * (1.0 + frobenius(b)) for b in a.blocks
    )


def require_selfadjoint(a: BlockElement, tol: float = SA_TOL):
    if not is_selfadjoint(a, tol):
        raise SelfAdjointnessError("element is not self-adjoint within tolerance")


@dataclass(frozen=True)
class TraceWeights:
    """Faithful tracial state: positive weights against normalized block traces."""

    weights: tuple[float, ...]

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if any(x <= 0.0 for x in w):
            raise ValidationError("trace weights must all be positive (faithfulness)")
        if abs(sum(w) - 1.0) > 1e-12:
            raise ValidationError(f"trace weights must sum to 1, got {sum(w)!r}")
        object.__setattr__(self, "weights", w)

    def block_factors(self, parent: FdCStar) -> np.ndarray:
        """Per-block factor t_i / d_i multiplying the unnormalized trace."""
        if len(self.weights) != parent.n_blocks:
            raise ValidationError("weight count does not match block count")
        return np.array([t / d for t, d in zip(self.weights, parent.block_dims)])


def trace_eval(mu: TraceWeights, a: BlockElement) -> complex:
    """mu(a) = sum_i t_i Tr(a_i) / d_i."""
    factors = mu.block_factors(a.parent)
    return complex(sum(f * np.trace(b) for f, b in zip(factors, a.blocks)))


def inner_mu(mu: TraceWeights, x: BlockElement, y: BlockElement) -> complex:
    """Trace inner product <x, y> = mu(x* y), conjugate-linear in x."""
    x._same_parent(y)
    factors = mu.block_factors(x.parent)
    total = 0.0 + 0.0j
    for f, bx, by in zip(factors, x.blocks, y.blocks):
        total += f * np.sum(bx.conj() * by)
    return complex(total)


def trace_state(mu: TraceWeights, parent: FdCStar) -> "StateVec":
    """The tracial state itself, as a density-block state."""
    factors = mu.block_factors(parent)
    return StateVec(
        parent,
        tuple(f * np.eye(d, dtype=np.complex128) for f, d in zip(factors, parent.block_dims)),
    )


@dataclass(frozen=True)
class StateVec:
    """State as PSD density blocks paired by phi(a) = sum_i Tr(sigma_i a_i)."""

    parent: FdCStar
    density_blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.density_blocks) != self.parent.n_blocks:
            raise ValidationError("density block count does not match the algebra")
        coerced = []
        total = 0.0
        for d, b in zip(self.parent.block_dims, self.density_blocks):
            if d == 1:
                m = np.asarray(b, dtype=np.complex128).reshape(1, 1)
                v = m[0, 0]
                if not np.isfinite(v):
                    raise ValidationError("density block has non-finite entries")
                if abs(v.imag) > 1e-10 * (1.0 + abs(v)):
                    raise ValidationError("density block is not Hermitian")
                if v.real < -1e-10:
                    raise ValidationError(f"density block has eigenvalue {v.real} < -1e-10")
                total += float(v.real)
                coerced.append(_freeze(m.copy()))
                continue
            m = as_matrix(b)
            if m.shape != (d, d):
                raise ValidationError(f"density block shape {m.shape} does not match dim {d}")
            if frobenius(m - m.conj().T) > 1e-10 * (1.0 + frobenius(m)):
                raise ValidationError("density block is not Hermitian")
            low = eigvals_hermitian(0.5 * (m + m.conj().T))[0]
            if low < -1e-10:
                raise ValidationError(f"density block has eigenvalue {low} < -1e-10")
            total += float(np.trace(m).real)
            coerced.append(_freeze(m.copy()))
        if abs(total - 1.0) > 1e-10:
            raise ValidationError(f"density blocks must have total trace 1, got {total!r}")
        object.__setattr__(self, "density_blocks", tuple(coerced))


def state_eval(phi: StateVec, a: BlockElement) -> complex:
    if phi.parent != a.parent:
        raise ValidationError("state and element live in different algebras")
    total = 0.0 + 0.0j
    for s, b in zip(phi.density_blocks, a.blocks):
        total += np.sum(s.T * b)  # Tr(sigma a)
    return complex(total)


# -- random generators used by the verification suites ---------------------

def random_element(parent: FdCStar, rng: np.random.Generator, scale_: float = 1.0) -> BlockElement:
    blocks = []
    for d in parent.block_dims:
        m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        blocks.append(scale_ * m)
    return BlockElement(parent, tuple(blocks))


def random_selfadjoint(parent: FdCStar, rng: np.random.Generator, scale_: float = 1.0) -> BlockElement:
    a = random_element(parent, rng, scale_)
    return scale(0.5, a + adjoint(a))


def random_state(parent: FdCStar, rng: np.random.Generator) -> StateVec:
    raw = []
    total = 0.0
    for d in parent.block_dims:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        s = g @ g.conj().T
        raw.append(s)
        total += float(np.trace(s).real)
    return StateVec(parent, tuple(s / total for s in raw))


def point_state(parent: FdCStar, block_index: int) -> StateVec:
    """Point evaluation on an Abelian algebra (all blocks of dimension 1)."""
    if any(d != 1 for d in parent.block_dims):
        raise ValidationError("point states need an Abelian (all dims 1) algebra")
    blocks = [np.zeros((1, 1), dtype=np.complex128) for _ in parent.block_dims]
    blocks[block_index][0, 0] = 1.0
    return StateVec(parent, tuple(blocks))
