"""Monge-Kantorovich distances between states, through the dual sup.

Three routes:
  * an exact LP for Abelian towers (cylinder-averaging constraints), run on
    an automorphism-reduced variable set so point-evaluation instances stay
    tiny at any depth;
  * a Kelley cutting-plane maximizer with spectral-norm cuts for the general
    block case, returning an honest lower/upper bracket;
  * a closed form for depth-1 single-block data, used as a cross-check
    oracle (itself brute-force validated in the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import (
    BlockElement,
    FdCStar,
    StateVec,
    TraceWeights,
    inner_mu,
    state_eval,
    unit,
)
from .errors import ValidationError
from .expectation import ExpectationOperator
from .lipnorm import LipData
from .linalg import herm_eigen
from .simplex import solve_lp

CUT_CAP = 10000
VIOLATION_SLACK = 1e-12


@dataclass
class MkResult:
    lower: float
    upper: float
    iterations: int
    method: str  # "LP-exact" | "cutting-plane" | "closed-form"
    converged: bool = True

    @property
    def value(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def to_record(self) -> dict:
        return {
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "method": self.method,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _state_values(phi: StateVec) -> np.ndarray:
    vals = np.array([b[0, 0] for b in phi.density_blocks])
    if np.max(np.abs(vals.imag)) > 1e-12:
        raise ValidationError("Abelian state has non-real density entries")
    return vals.real.copy()


def _ancestor_table(lip_data: LipData) -> np.ndarray:
    """anc[n, i] = index of the level-n block below leaf i of the top level."""
    tower, top = lip_data.tower, lip_data.level
    leaves = tower.levels[top].n_blocks
    anc = np.zeros((top + 1, leaves), dtype=np.int64)
    anc[top] = np.arange(leaves)
    for n in range(top - 1, -1, -1):
        parent_of = np.zeros(tower.levels[n + 1].n_blocks, dtype=np.int64)
        for j, lst in enumerate(tower.layouts[n].target_lists):
            parent_of[j] = lst[0]
        anc[n] = parent_of[anc[n + 1]]
    return anc


def _orbit_classes(lip_data: LipData, phi: np.ndarray, psi: np.ndarray, w: np.ndarray):
    """Partition leaves into orbits of data-preserving tree automorphisms.

    Two sibling subtrees may be swapped whenever their (phi, psi, weight)
    labelled shapes coincide exactly, and an optimal dual function can be
    averaged to be constant on the resulting leaf orbits.  Orbit identity is
    the path of canonical subtree ids from the root.
    """
    tower, top = lip_data.tower, lip_data.level
    children: list[list[list[int]]] = []
    for n in range(top):
        kids = [[] for _ in range(tower.levels[n].n_blocks)]
        for j, lst in enumerate(tower.layouts[n].target_lists):
            kids[lst[0]].append(j)
        children.append(kids)

    canon_ids: dict = {}
    memo: dict[tuple[int, int], int] = {}
    leaf_keys = [
        ("L", float(a).hex(), float(b).hex(), float(c).hex())
        for a, b, c in zip(phi, psi, w)
    ]

    def canon(n: int, j: int) -> int:
        got = memo.get((n, j))
        if got is not None:
            return got
        if n == top:
            key = leaf_keys[j]
        else:
            key = ("N",) + tuple(sorted(canon(n + 1, ch) for ch in children[n][j]))
        out = canon_ids.setdefault(key, len(canon_ids))
        memo[(n, j)] = out
        return out

    paths: dict[tuple, int] = {}
    leaf_class = np.zeros(tower.levels[top].n_blocks, dtype=np.int64)

    def walk(n: int, j: int, prefix: tuple):
        me = prefix + (canon(n, j),)
        if n == top:
            leaf_class[j] = paths.setdefault(me, len(paths))
            return
        for ch in children[n][j]:
            walk(n + 1, ch, me)

    walk(0, 0, ())
    return leaf_class, len(paths)


def mk_abelian(
    lip_data: LipData,
    phi: StateVec,
    psi: StateVec,
    reduce_orbits: bool = True,
) -> MkResult:
    """Exact LP value of the dual sup on an Abelian tower.

    Maximizes (phi - psi)(f) over real functions with every cylinder
    averaging defect bounded: ||f - E_n f||_inf <= beta(n) for n = 0..top.
    The mean-zero normalization costs nothing since the objective kills
    constants and pins the feasible set inside the beta(0) box.
    """
    tower, top = lip_data.tower, lip_data.level
    parent = tower.levels[top]
    if not tower.is_abelian:
        raise ValidationError("mk_abelian needs an Abelian tower; use mk_general")
    if phi.parent != parent or psi.parent != parent:
        raise ValidationError("states do not live on the top level")
    beta = lip_data.beta
    pv, qv = _state_values(phi), _state_values(psi)
    w = lip_data.tower.trace(top).block_factors(parent)
    leaves = parent.n_blocks
    anc = _ancestor_table(lip_data)

    if reduce_orbits:
        leaf_class, n_classes = _orbit_classes(lip_data, pv, qv, w)
    else:
        leaf_class, n_classes = np.arange(leaves, dtype=np.int64), leaves

    class_w = np.zeros(n_classes)
    obj = np.zeros(n_classes)
    np.add.at(class_w, leaf_class, w)
    np.add.at(obj, leaf_class, pv - qv)
    rep = np.zeros(n_classes, dtype=np.int64)
    rep[leaf_class[::-1]] = np.arange(leaves - 1, -1, -1, dtype=np.int64)

    # cylinder masses per class, per level
    rows, rhs = [], []
    for n in range(top + 1):
        cyl_count = tower.levels[n].n_blocks
        mass = np.zeros((cyl_count, n_classes))
        np.add.at(mass, (anc[n], leaf_class), w)
        total = mass.sum(axis=1)
        for c in range(n_classes):
            cyl = anc[n, rep[c]]
            row = -mass[cyl] / total[cyl]
            row[c] += 1.0
            if np.all(row == 0.0):
                continue
            rows.append(row)
            rhs.append(beta[n])
            rows.append(-row)
            rhs.append(beta[n])

    a_ub = np.array(rows) if rows else np.zeros((0, n_classes))
    b_ub = np.array(rhs)
    a_eq = class_w.reshape(1, -1)
    b_eq = np.zeros(1)

    # shift to nonnegative variables: x = y + beta(0)
    shift = np.full(n_classes, beta[0])
    b_ub_s = b_ub + a_ub @ shift if rows else b_ub
    b_eq_s = b_eq + a_eq @ shift
    res = solve_lp(obj, a_ub, b_ub_s, a_eq, b_eq_s)
    if res.status != "optimal":
        raise ValidationError(f"abelian transport LP ended with status {res.status}")
    value = max(res.value - float(obj @ shift), 0.0)
    return MkResult(value, value, res.iterations, "LP-exact")


# -- general (block) case ---------------------------------------------------

def hermitian_basis(parent: FdCStar) -> list[BlockElement]:
    """Real basis of the self-adjoint part, blockwise, in deterministic order."""
    out = []
    for k, d in enumerate(parent.block_dims):
        for j in range(d):
            blocks = [np.zeros((dd, dd), dtype=np.complex128) for dd in parent.block_dims]
            blocks[k][j, j] = 1.0
            out.append(BlockElement(parent, tuple(blocks)))
        for j in range(d):
            for m in range(j + 1, d):
                blocks = [np.zeros((dd, dd), dtype=np.complex128) for dd in parent.block_dims]
                blocks[k][j, m] = blocks[k][m, j] = 1.0 / np.sqrt(2.0)
                out.append(BlockElement(parent, tuple(blocks)))
                blocks = [np.zeros((dd, dd), dtype=np.complex128) for dd in parent.block_dims]
                blocks[k][j, m] = -1j / np.sqrt(2.0)
                blocks[k][m, j] = 1j / np.sqrt(2.0)
                out.append(BlockElement(parent, tuple(blocks)))
    return out


def traceless_orthonormal_basis(parent: FdCStar, mu: TraceWeights) -> list[BlockElement]:
    """mu-orthonormal basis of the mu-traceless self-adjoint subspace."""
    one = unit(parent)
    norm1 = np.sqrt(inner_mu(mu, one, one).real)
    basis = [BlockElement(parent, tuple(b / norm1 for b in one.blocks))]
    for cand in hermitian_basis(parent):
        v = cand
        for b in basis:
            coeff = inner_mu(mu, b, v).real
            v = v - BlockElement(parent, tuple(coeff * blk for blk in b.blocks))
        nrm = np.sqrt(max(inner_mu(mu, v, v).real, 0.0))
        if nrm > 1e-9:
            basis.append(BlockElement(parent, tuple(blk / nrm for blk in v.blocks)))
    return basis[1:]


def mk_general(
    lip_data: LipData,
    phi: StateVec,
    psi: StateVec,
    tol: float = 1e-5,
    max_iter: int = CUT_CAP,
) -> MkResult:
    """Kelley cutting planes on {mu(a) = 0, ||a - E_n a|| <= beta(n) for n < top}.

    Each violated spectral constraint contributes the linear cut obtained
    from its extreme eigenvector; scaled candidates supply the lower bound,
    master relaxations the upper one.
    """
    tower, top = lip_data.tower, lip_data.level
    parent = tower.levels[top]
    if phi.parent != parent or psi.parent != parent:
        raise ValidationError("states do not live on the top level")
    mu = tower.trace(top)
    beta = lip_data.beta
    basis = traceless_orthonormal_basis(parent, mu)
    m = len(basis)
    n_blocks = parent.n_blocks
    if m == 0:
        return MkResult(0.0, 0.0, 0, "cutting-plane", True)

    obj = np.array([(state_eval(phi, b) - state_eval(psi, b)).real for b in basis])
    # stacks of the basis and of its expectation defects, per block
    b_stack = [np.stack([b.blocks[ib] for b in basis]) for ib in range(n_blocks)]
    defect_stacks = []
    for n in range(top):
        op = lip_data.expectation(n)
        diffs = [b - op.apply(b) for b in basis]
        defect_stacks.append(
            [np.stack([d.blocks[ib] for d in diffs]) for ib in range(n_blocks)]
        )

    box = 2.0 * beta[0] * parent.total_dim
    cuts: list[np.ndarray] = []
    cut_rhs: list[float] = []
    lower, upper = 0.0, np.inf
    iters = 0
    converged = False

    while iters < max_iter:
        iters += 1
        # master: max obj.x, cuts, |x_j| <= box; shift u = x + box >= 0
        g = np.array(cuts) if cuts else np.zeros((0, m))
        h = np.array(cut_rhs)
        a_ub = np.vstack([g, np.eye(m)])
        b_ub = np.concatenate([h + (g @ np.full(m, box) if cuts else np.zeros(0)), np.full(m, 2.0 * box)])
        res = solve_lp(obj, a_ub, b_ub)
        if res.status != "optimal":
            raise ValidationError(f"master LP ended with status {res.status}")
        x = res.x - box
        upper = res.value - float(obj @ np.full(m, box))

        worst_scale = 1.0
        violated = False
        for n in range(top):
            hmat = [np.tensordot(x, stack, axes=(0, 0)) for stack in defect_stacks[n]]
            block_norm, block_idx, eig = 0.0, 0, None
            for ib, hb in enumerate(hmat):
                e = herm_eigen(0.5 * (hb + hb.conj().T))
                nrm = max(abs(e.eigenvalues[0]), abs(e.eigenvalues[-1]))
                if nrm > block_norm:
                    block_norm, block_idx, eig = nrm, ib, e
            if block_norm > beta[n] * (1.0 + VIOLATION_SLACK) and eig is not None:
                violated = True
                worst_scale = min(worst_scale, beta[n] / block_norm)
                for which in (0, -1):
                    lam = eig.eigenvalues[which]
                    if abs(lam) <= beta[n]:
                        continue
                    v = eig.eigenvectors[:, which]
                    stack = defect_stacks[n][block_idx]
                    coeff = np.real(np.einsum("i,lij,j->l", v.conj(), stack, v))
                    sign = 1.0 if lam > 0 else -1.0
                    cuts.append(sign * coeff)
                    cut_rhs.append(beta[n])
        lower = max(lower, worst_scale * upper)
        if not violated:
            lower = upper
            converged = True
            break
        if upper - lower <= tol:
            converged = True
            break

    return MkResult(lower, upper, iters, "cutting-plane", converged)


def mk_depth1_closed_form(beta0: float, phi: StateVec, psi: StateVec) -> float:
    """sup (phi - psi)(a) over mu-centered a with ||a|| <= beta0, single block.

    By duality this is beta0 . min_t ||Delta - t 1||_tr, the minimum at the
    median eigenvalue; for 2x2 blocks it reduces to the plain trace norm of
    the density difference.
    """
    if phi.parent != psi.parent:
        raise ValidationError("states live on different algebras")
    if phi.parent.n_blocks != 1:
        raise ValidationError("closed form needs a single-block algebra")
    if beta0 <= 0:
        raise ValidationError("beta0 must be positive")
    delta = phi.density_blocks[0] - psi.density_blocks[0]
    vals = herm_eigen(0.5 * (delta + delta.conj().T)).eigenvalues
    med = vals[(len(vals) - 1) // 2]
    return float(beta0 * np.sum(np.abs(vals - med)))


def pushforward_under_expectation(phi: StateVec, op: ExpectationOperator) -> StateVec:
    """The state a -> phi(E(a)), as density blocks on the same level."""
    if phi.parent != op.target:
        raise ValidationError("state does not live on the operator's top level")
    phis = np.zeros(len(op.unit_index), dtype=np.complex128)
    for ib, stack in enumerate(op.stacks):
        phis += np.einsum("ji,lij->l", phi.density_blocks[ib].T, stack)
    coeffs = phis / op.nus
    blocks = []
    for ib, stack in enumerate(op.stacks):
        m = op._factors[ib] * np.einsum("l,lij->ij", coeffs, stack.conj())
        blocks.append(0.5 * (m + m.conj().T))
    return StateVec(op.target, tuple(blocks))
