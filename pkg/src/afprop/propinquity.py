"""Certified upper bounds on the quantum propinquity from explicit bridges.

Every bound returned here is realized by a concrete bridge: truncation onto
a tower level (unit pivot, zero height), data-identical prefixes glued
through the shared finite level, the sequence-space Holder estimate for
single-block towers, and the two-seminorm comparison bridge whose reach is
certified by a sphere grid.  The infimum over all bridges is never computed.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import cfrac
from .algebra import FdCStar, TraceWeights
from .errors import GridBudgetError, UndeterminedDistanceError, ValidationError
from .linalg import batched_hermitian_opnorms
from .lipnorm import LipData, lip_lipschitz_constant
from .mk import traceless_orthonormal_basis
from .tower import BetaSequence, InductiveTower, effros_shen_tower

SAMPLE_CAP = 10**7
CHUNK = 1 << 16


@dataclass
class BridgeBound:
    value: float
    kind: str  # truncation | prefix | holder | two-lipnorm-grid | effros-shen-chain | diameter
    certified: bool
    params: dict = field(default_factory=dict)
    notes: str = ""

    def to_record(self) -> dict:
        return {
            "value": self.value,
            "kind": self.kind,
            "certified": self.certified,
            "params": self.params,
            "notes": self.notes,
        }


def truncation_bound(lip_data: LipData, n: int) -> BridgeBound:
    """Distance from the tower's metric to its level-n truncation: beta(n).

    The identity-pivot bridge through the containing algebra has zero height
    and reach at most beta(n), because the level-n projection moves every
    unit-seminorm element by at most beta(n) without increasing the seminorm.
    """
    if not 0 <= n <= lip_data.level:
        raise ValidationError(f"level must be in 0..{lip_data.level}")
    return BridgeBound(
        lip_data.beta[n], "truncation", True, {"level": n, "beta": lip_data.beta[n]}
    )


def _betas_match(a: BetaSequence, b: BetaSequence, upto: int) -> bool:
    return a.values[: upto + 1] == b.values[: upto + 1]


def prefix_match_bound(
    tower_a: InductiveTower,
    beta_a: BetaSequence,
    tower_b: InductiveTower,
    beta_b: BetaSequence,
    shared_level: int,
) -> BridgeBound:
    """betaA(N) + betaB(N) when all tower data agree bit-for-bit up to N.

    Identical prefixes make the two level-N truncations isometric, so the
    two truncation bridges glue; any validation failure falls back to the
    diameter bound max(betaA(0), betaB(0)) from the scalar-pivot bridge.
    """
    n = shared_level
    reason = None
    if n > min(tower_a.depth, tower_b.depth):
        reason = "shared level exceeds a tower depth"
    elif len(beta_a) <= n or len(beta_b) <= n:
        reason = "beta sequences shorter than the shared level"
    else:
        for j in range(n + 1):
            if tower_a.levels[j].block_dims != tower_b.levels[j].block_dims:
                reason = f"level {j} dimensions differ"
                break
            if tower_a.trace_levels[j].weights != tower_b.trace_levels[j].weights:
                reason = f"level {j} trace weights differ"
                break
            if j < n and tower_a.layouts[j].target_lists != tower_b.layouts[j].target_lists:
                reason = f"layout {j} differs"
                break
        if reason is None and not _betas_match(beta_a, beta_b, n):
            reason = "beta values differ on the prefix"
    if reason is not None:
        return BridgeBound(
            max(beta_a[0], beta_b[0]),
            "diameter",
            True,
            {"fallback_reason": reason},
        )
    return BridgeBound(
        beta_a[n] + beta_b[n],
        "prefix",
        True,
        {"shared_level": n, "beta_a": beta_a[n], "beta_b": beta_b[n]},
    )


def uhf_holder_bound(beta_seq: Sequence[int], eta_seq: Sequence[int], k: float) -> BridgeBound:
    """2 d(beta, eta)^k for single-block towers keyed by multiplier sequences."""
    if any(int(e) < 1 for e in beta_seq) or any(int(e) < 1 for e in eta_seq):
        raise ValidationError("multiplier entries must be >= 1")
    if k <= 0:
        raise ValidationError("k must be positive")
    try:
        d = cfrac.baire_distance(tuple(beta_seq), tuple(eta_seq))
        determined = True
    except UndeterminedDistanceError as exc:
        d = exc.witness_bound
        determined = False
    return BridgeBound(
        2.0 * d**k,
        "holder",
        True,
        {"distance": d, "k": k, "distance_determined": determined},
        notes="" if determined else "distance bounded by the witnessed span only",
    )


# -- sphere grid ------------------------------------------------------------

_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71]


def _norm_ppf(u: np.ndarray) -> np.ndarray:
    """Acklam's rational approximation to the standard normal quantile."""
    a = [-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
         1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00]
    b = [-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
         6.680131188771972e01, -1.328068155288572e01]
    c = [-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
         -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00]
    d = [7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
         3.754408661907416e00]
    u = np.clip(u, 1e-15, 1.0 - 1e-15)
    out = np.empty_like(u)
    lo = u < 0.02425
    hi = u > 1.0 - 0.02425
    mid = ~(lo | hi)
    if lo.any():
        q = np.sqrt(-2.0 * np.log(u[lo]))
        out[lo] = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    if hi.any():
        q = np.sqrt(-2.0 * np.log(1.0 - u[hi]))
        out[hi] = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0
        )
    if mid.any():
        q = u[mid] - 0.5
        r = q * q
        out[mid] = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / (
            ((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0
        )
    return out


def sphere_cover_count(dim: int, delta: float) -> int:
    """Nominal point count for covering radius delta on the Euclidean S^(dim-1).

    One point per spherical cap of chordal radius delta, by numerical
    quadrature of the cap area; the standard accounting for how grid budgets
    scale with resolution and dimension.
    """
    if dim < 1:
        raise ValidationError("dimension must be >= 1")
    if delta >= 2.0:
        return 1
    if dim == 1:
        return 2
    theta = 2.0 * math.asin(min(delta, 2.0) / 2.0)
    grid = np.linspace(0.0, math.pi, 20001)
    integrand = np.sin(grid) ** (dim - 2)
    total = np.trapezoid(integrand, grid)
    cap = np.trapezoid(
        np.sin(np.linspace(0.0, theta, 2001)) ** (dim - 2),
        np.linspace(0.0, theta, 2001),
    )
    if cap <= 0.0:
        return SAMPLE_CAP + 1
    return int(math.ceil(total / cap))


_sphere_cache: dict[tuple[int, int], np.ndarray] = {}


def _kronecker_sphere(count: int, dim: int) -> np.ndarray:
    """Deterministic low-discrepancy points on S^(dim-1), prefix-nested."""
    key = (count, dim)
    cached = _sphere_cache.get(key)
    if cached is not None:
        return cached
    alphas = np.sqrt(np.array(_PRIMES[:dim], dtype=float))
    idx = np.arange(1, count + 1, dtype=float)[:, None]
    u = np.mod(idx * alphas[None, :] + 0.5, 1.0)
    g = _norm_ppf(u)
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0.0] = 1.0
    pts = g / norms[:, None]
    _sphere_cache.clear()
    _sphere_cache[key] = pts
    return pts


class _GridEvaluator:
    """Batched seminorm evaluation over coefficient vectors of a fixed basis."""

    def __init__(self, lip_data: LipData, basis):
        parent = lip_data.algebra
        self.beta = [lip_data.beta[n] for n in range(lip_data.level)]
        self.defects = []
        for n in range(lip_data.level):
            op = lip_data.expectation(n)
            diffs = [b - op.apply(b) for b in basis]
            self.defects.append(
                [np.stack([d.blocks[ib] for d in diffs]) for ib in range(parent.n_blocks)]
            )

    def lip_values(self, coeffs: np.ndarray) -> np.ndarray:
        out = np.zeros(coeffs.shape[0])
        for bn, stacks in zip(self.beta, self.defects):
            level_norm = np.zeros(coeffs.shape[0])
            for stack in stacks:
                h = np.tensordot(coeffs, stack, axes=(1, 0))
                h = 0.5 * (h + np.conj(np.swapaxes(h, 1, 2)))
                np.maximum(level_norm, batched_hermitian_opnorms(h), out=level_norm)
            np.maximum(out, level_norm / bn, out=out)
        return out


def two_lipnorm_bridge_bound(
    lip1: LipData,
    lip2: LipData,
    h: float,
    sample_cap: int = SAMPLE_CAP,
) -> BridgeBound:
    """Unit-pivot bridge between two seminorms on the same finite level.

    Over the unit sphere of the traceless self-adjoint subspace, sampled at
    covering radius h, the certified reach is

        (max sampled |L1 - L2| + (K1 + K2) h) / (m1_low . m2_low),

    with m_i_low = min sampled L_i - K_i h.  Nonpositive m_low means the
    grid cannot separate the seminorms from zero: inconclusive, refine.
    """
    parent = lip1.algebra
    if parent != lip2.algebra:
        raise ValidationError("seminorms live on different algebras")
    if h <= 0:
        raise ValidationError("grid resolution must be positive")
    mu1 = lip1.tower.trace(lip1.level)
    basis = traceless_orthonormal_basis(parent, mu1)
    m = len(basis)
    if m == 0:
        return BridgeBound(0.0, "two-lipnorm-grid", True, {"dim": 0, "count": 0, "h": h})

    k1, k2 = lip_lipschitz_constant(lip1), lip_lipschitz_constant(lip2)
    w_min = float(mu1.block_factors(parent).min())
    c2 = 1.0 / math.sqrt(w_min)
    delta = h / (2.0 * c2)
    count = sphere_cover_count(m, delta)
    if count > sample_cap:
        raise GridBudgetError(m, h, count, sample_cap)

    b_stacks = [
        np.stack([b.blocks[ib] for b in basis]) for ib in range(parent.n_blocks)
    ]
    ev1, ev2 = _GridEvaluator(lip1, basis), _GridEvaluator(lip2, basis)

    axes = np.vstack([np.eye(m), -np.eye(m)])
    points = np.vstack([_kronecker_sphere(count, m), axes])

    def norms_of(coeffs: np.ndarray) -> np.ndarray:
        out = np.zeros(coeffs.shape[0])
        for stack in b_stacks:
            a = np.tensordot(coeffs, stack, axes=(1, 0))
            a = 0.5 * (a + np.conj(np.swapaxes(a, 1, 2)))
            np.maximum(out, batched_hermitian_opnorms(a), out=out)
        return out

    def eval_chunk(chunk: np.ndarray):
        nrm = norms_of(chunk)
        scaled = chunk / nrm[:, None]
        l1 = ev1.lip_values(scaled)
        l2 = ev2.lip_values(scaled)
        return float(np.max(np.abs(l1 - l2))), float(l1.min()), float(l2.min())

    chunks = [points[i : i + CHUNK] for i in range(0, points.shape[0], CHUNK)]
    workers = max(1, int(os.environ.get("AFPROP_THREADS", "1")))
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(eval_chunk, chunks))
    else:
        results = [eval_chunk(c) for c in chunks]
    d_sampled = max(r[0] for r in results)
    m1_sampled = min(r[1] for r in results)
    m2_sampled = min(r[2] for r in results)

    d_up = d_sampled + (k1 + k2) * h
    m1_low = m1_sampled - k1 * h
    m2_low = m2_sampled - k2 * h
    params = {
        "h": h,
        "dim": m,
        "count": int(points.shape[0]),
        "K1": k1,
        "K2": k2,
        "max_diff_sampled": d_sampled,
        "min_lip1_sampled": m1_sampled,
        "min_lip2_sampled": m2_sampled,
        "coefficient_radius": delta,
    }
    if min(m1_low, m2_low) <= 0.0:
        return BridgeBound(
            math.inf,
            "two-lipnorm-grid",
            False,
            params,
            notes="inconclusive: refine grid",
        )
    return BridgeBound(d_up / (m1_low * m2_low), "two-lipnorm-grid", True, params)


def effros_shen_chain_bound(
    theta: float,
    theta2: float,
    k: float,
    level: int,
    h: float,
    guard: float = cfrac.DEFAULT_GUARD,
) -> BridgeBound:
    """Two truncations plus the two-seminorm bridge on the shared level.

    Requires the continued-fraction digits of both parameters to agree up to
    ``level``; the universal part reported alongside is the golden-ratio
    floor of the truncation terms, the least possible over all parameters.
    """
    digits1 = cfrac.cf_expand(theta, level, guard)
    digits2 = cfrac.cf_expand(theta2, level, guard)
    if digits1 != digits2:
        raise ValidationError(
            "continued-fraction prefixes disagree at the requested level; "
            "only the diameter fallback max(beta(0), beta'(0)) applies"
        )
    tower1, beta1 = effros_shen_tower(digits1, theta, k)
    tower2, beta2 = effros_shen_tower(digits2, theta2, k)
    l1, l2 = LipData(tower1, beta1), LipData(tower2, beta2)
    t1 = truncation_bound(l1, level)
    t2 = truncation_bound(l2, level)
    mid = two_lipnorm_bridge_bound(l1, l2, h)
    fib = cfrac.convergents([1] * max(level, 1))
    universal = 2.0 / float(fib.q[level] ** 2 + fib.q[level - 1] ** 2) ** k
    params = {
        "level": level,
        "digits": list(digits1),
        "truncation_a": t1.value,
        "truncation_b": t2.value,
        "grid_term": mid.value,
        "universal_floor": universal,
        "grid": mid.params,
    }
    return BridgeBound(
        t1.value + t2.value + mid.value,
        "effros-shen-chain",
        mid.certified,
        params,
        notes=mid.notes,
    )
