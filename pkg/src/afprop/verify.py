"""Named verification suites with machine-readable reports.

Each suite returns {"suite", "seed", "checks": [...], "passed"}; a check is
{"name", "worst", "tol", "passed"} plus occasional extras.  All randomness
flows from the seed, and reports serialize byte-identically across runs.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import cfrac
from .algebra import (
    BlockElement,
    FdCStar,
    StateVec,
    TraceWeights,
    adjoint,
    cstar_norm,
    mul,
    point_state,
    random_selfadjoint,
    random_state,
    scale,
    state_eval,
    trace_eval,
    trace_state,
    unit,
)
from .cantor import u_element, verify_mk_vs_oracle
from .errors import PrecisionError
from .expectation import ExpectationOperator
from .linalg import batched_eigvals_hermitian, batched_hermitian_opnorms
from .lipnorm import LipData, lip, lip_batch, lip_lipschitz_constant
from .mk import (
    mk_abelian,
    mk_depth1_closed_form,
    mk_general,
    pushforward_under_expectation,
)
from .propinquity import (
    effros_shen_chain_bound,
    prefix_match_bound,
    truncation_bound,
    two_lipnorm_bridge_bound,
    uhf_holder_bound,
)
from .tower import (
    BetaSequence,
    EmbeddingLayout,
    InductiveTower,
    beta_geometric,
    cantor_tower,
    effros_shen_tower,
    uhf_tower,
    validate,
)

PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _check(name: str, worst: float, tol: float, **extra) -> dict:
    rec = {"name": name, "worst": float(worst), "tol": tol, "passed": bool(worst <= tol)}
    rec.update(extra)
    return rec


def _finish(suite: str, seed, checks: list[dict]) -> dict:
    return {
        "suite": suite,
        "seed": seed,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def _random_stack(parent: FdCStar, rng: np.random.Generator, count: int, selfadjoint=False):
    stacks = []
    for d in parent.block_dims:
        g = rng.standard_normal((count, d, d)) + 1j * rng.standard_normal((count, d, d))
        if selfadjoint:
            g = 0.5 * (g + np.conj(np.swapaxes(g, 1, 2)))
        stacks.append(g)
    return stacks


def _stack_fro(stacks) -> np.ndarray:
    return np.sqrt(sum(np.sum(np.abs(b) ** 2, axis=(1, 2)).real for b in stacks))


def _mul_stacks(a, b):
    return [x @ y for x, y in zip(a, b)]


def _sub_stacks(a, b):
    return [x - y for x, y in zip(a, b)]


# -- expectation axioms (criterion 2) ---------------------------------------

def _tower_pair_depth5():
    es_tower, es_beta = effros_shen_tower([1, 1, 1, 1, 1], PHI, k=1)
    uhf_t, uhf_beta = uhf_tower([1, 1, 1, 1, 1], k=1)
    return [("effros-shen-phi-5", es_tower, es_beta), ("uhf-2n-5", uhf_t, uhf_beta)]


class _IdentityOp:
    """Stand-in for the top-level projection, which fixes everything."""

    @staticmethod
    def apply_stack(stacks):
        return stacks


def expectation_axioms(seed: int = 0, samples: int = 200) -> dict:
    checks = []
    rng = np.random.default_rng(seed)
    for label, tower, _beta in _tower_pair_depth5():
        top = tower.depth
        mu = tower.trace(top)
        factors = mu.block_factors(tower.top)
        ops = [ExpectationOperator(tower, n, top) for n in range(top)] + [_IdentityOp()]
        stacks = _random_stack(tower.top, rng, samples)

        def mu_stack(st):
            return sum(
                f * np.trace(b, axis1=1, axis2=2) for f, b in zip(factors, st)
            )

        images = [op.apply_stack(stacks) for op in ops]

        worst = max(
            float(_stack_fro(_sub_stacks(op.apply_stack(images[n]), images[n])).max())
            for n, op in enumerate(ops)
        )
        checks.append(_check(f"{label}:idempotence", worst, 1e-9))

        worst = 0.0
        for p_idx in range(top + 1):
            for n_idx in range(top + 1):
                lhs = ops[p_idx].apply_stack(images[n_idx])
                rhs = images[min(p_idx, n_idx)]
                worst = max(worst, float(_stack_fro(_sub_stacks(lhs, rhs)).max()))
        checks.append(_check(f"{label}:nesting", worst, 1e-9))

        worst = max(
            float(np.max(np.abs(mu_stack(images[n]) - mu_stack(stacks))))
            for n in range(top + 1)
        )
        checks.append(_check(f"{label}:trace-preservation", worst, 1e-9))

        worst = 0.0
        for n in range(top + 1):
            b_low = _random_stack(tower.levels[n], rng, samples)
            c_low = _random_stack(tower.levels[n], rng, samples)
            b_up = _embed_stack(tower, b_low, n, top)
            c_up = _embed_stack(tower, c_low, n, top)
            lhs = ops[n].apply_stack(_mul_stacks(_mul_stacks(b_up, stacks), c_up))
            rhs = _mul_stacks(_mul_stacks(b_up, images[n]), c_up)
            worst = max(worst, float(_stack_fro(_sub_stacks(lhs, rhs)).max()))
        checks.append(_check(f"{label}:bimodule", worst, 1e-9))

        worst = 0.0
        sa = _random_stack(tower.top, rng, samples, selfadjoint=True)
        base = np.zeros(samples)
        for blk in sa:
            np.maximum(base, batched_hermitian_opnorms(blk), out=base)
        for n in range(top):
            coeff = _coefficient_stack(ops[n], sa)
            level_norm = np.zeros(samples)
            for blk in coeff:
                np.maximum(level_norm, batched_hermitian_opnorms(blk), out=level_norm)
            worst = max(worst, float(np.max(level_norm - base)))
        checks.append(_check(f"{label}:norm-contraction", worst, 1e-9))

        worst = 0.0
        g = _random_stack(tower.top, rng, samples)
        psd = [np.conj(np.swapaxes(b, 1, 2)) @ b for b in g]
        for n in range(top):
            coeff = _coefficient_stack(ops[n], psd)
            low = min(float(batched_eigvals_hermitian(_hermitize(b))[..., 0].min()) for b in coeff)
            worst = max(worst, -low)
        checks.append(_check(f"{label}:positivity", worst, 1e-9))

        worst = max(
            float(
                _stack_fro(
                    _sub_stacks(
                        ops[n].apply_stack([np.conj(np.swapaxes(b, 1, 2)) for b in stacks]),
                        [np.conj(np.swapaxes(b, 1, 2)) for b in images[n]],
                    )
                ).max()
            )
            for n in range(top + 1)
        )
        checks.append(_check(f"{label}:adjoint-compatibility", worst, 1e-9))
    return _finish("expectation-axioms", seed, checks)


def _hermitize(stack: np.ndarray) -> np.ndarray:
    return 0.5 * (stack + np.conj(np.swapaxes(stack, 1, 2)))


def _embed_stack(tower: InductiveTower, stacks, n: int, m: int):
    """Batched version of the layout embedding, level n -> m."""
    cur = stacks
    for k in range(n, m):
        source, target = tower.levels[k], tower.levels[k + 1]
        out = []
        for lst, d in zip(tower.layouts[k].target_lists, target.block_dims):
            blk = np.zeros((cur[0].shape[0], d, d), dtype=np.complex128)
            pos = 0
            for s in lst:
                ds = source.block_dims[s]
                blk[:, pos : pos + ds, pos : pos + ds] = cur[s]
                pos += ds
            out.append(blk)
        cur = out
    return cur


def _coefficient_stack(op: ExpectationOperator, stacks):
    """Batched coefficient elements at the lower level (isometric image)."""
    c = np.zeros((stacks[0].shape[0], len(op.unit_index)), dtype=np.complex128)
    for f, stack, blk in zip(op._factors, op.stacks, stacks):
        c += f * np.einsum("lij,sij->sl", stack.conj(), blk)
    c /= op.nus
    out = []
    pos = 0
    for d in op.source.block_dims:
        out.append(c[:, pos : pos + d * d].reshape(-1, d, d))
        pos += d * d
    return out


# -- cantor oracle (criterion 1) ---------------------------------------------

def cantor_oracle_suite(
    seed: int = 0,
    depths=range(4, 11),
    ratios=(1.5, 2.0, 3.0),
    pairs: int = 50,
    tol: float = 1e-7,
) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    for depth in depths:
        for r in ratios:
            beta = beta_geometric(r, depth)
            tower = cantor_tower(depth, beta)
            data = LipData(tower, beta)
            done = 0
            while done < pairs:
                x = tuple(int(b) for b in rng.integers(0, 2, depth))
                y = tuple(int(b) for b in rng.integers(0, 2, depth))
                if x == y:
                    continue
                rep = verify_mk_vs_oracle(data, x, y, tol)
                worst = max(worst, rep["gap"])
                done += 1
                count += 1
    checks = [_check("lp-vs-closed-form", worst, tol, instances=count)]
    return _finish("cantor-oracle", seed, checks)


# -- quasi-Leibniz margins (criterion 3) -------------------------------------

def quasi_leibniz_suite(seed: int = 0, pairs: int = 500) -> dict:
    rng = np.random.default_rng(seed)
    checks = []
    es_tower, es_beta = effros_shen_tower([1, 1, 1], PHI, k=1)
    uhf_t, uhf_beta = uhf_tower([1, 2], k=1)
    for label, tower, beta in (
        ("effros-shen-phi-3", es_tower, es_beta),
        ("uhf-1-2", uhf_t, uhf_beta),
    ):
        data = LipData(tower, beta)
        a = _random_stack(tower.top, rng, pairs, selfadjoint=True)
        b = _random_stack(tower.top, rng, pairs, selfadjoint=True)
        ab = _mul_stacks(a, b)
        ba = _mul_stacks(b, a)
        jordan_stack = [0.5 * (x + y) for x, y in zip(ab, ba)]
        lie_stack = [(x - y) / 2.0j for x, y in zip(ab, ba)]
        la, lb = lip_batch(data, a), lip_batch(data, b)
        na = np.zeros(pairs)
        nb = np.zeros(pairs)
        for blk_a, blk_b in zip(a, b):
            np.maximum(na, batched_hermitian_opnorms(blk_a), out=na)
            np.maximum(nb, batched_hermitian_opnorms(blk_b), out=nb)
        bound = 2.0 * (na * lb + nb * la)
        jm = bound - lip_batch(data, jordan_stack)
        lm = bound - lip_batch(data, lie_stack)
        checks.append(_check(f"{label}:jordan-margin", float(-jm.min()), 1e-9))
        checks.append(_check(f"{label}:lie-margin", float(-lm.min()), 1e-9))
    return _finish("quasi-leibniz", seed, checks)


# -- Effros-Shen trace weights (criterion 4) ---------------------------------

def es_trace_suite(seed: int = 0, thetas: int = 20, depth: int = 8) -> dict:
    rng = np.random.default_rng(seed)
    checks = []

    exp = cfrac.convergents([1] * depth)
    t1 = (-1.0) ** 0 * exp.q[1] * (PHI * exp.q[0] - exp.p[0])
    checks.append(_check("t(phi,1)-equals-phi", abs(t1 - PHI), 1e-12))

    worst_range = 0.0
    worst_consistency = 0.0
    worst_complement = 0.0
    drawn = 0
    while drawn < thetas:
        theta = float(rng.uniform(0.05, 0.95))
        try:
            digits = cfrac.cf_expand(theta, depth)
            tower, _beta = effros_shen_tower(digits, theta, k=1)
        except PrecisionError:
            continue
        drawn += 1
        exp = cfrac.convergents(digits)
        rep = validate(tower)
        res = max((v["residual"] for v in rep.violations), default=0.0)
        worst_consistency = max(worst_consistency, res)
        if not rep.ok and res == 0.0:
            worst_consistency = math.inf
        ftheta = Fraction(theta)
        for n in range(1, depth + 1):
            t = tower.trace_levels[n].weights[0]
            worst_range = max(worst_range, -min(t, 1.0 - t) + 0.0)
            alt = float((-1) ** n * exp.q[n - 1] * (ftheta * exp.q[n] - exp.p[n]))
            worst_complement = max(worst_complement, abs((1.0 - t) - alt))
    checks.append(_check("t-in-open-unit-interval", worst_range, 0.0, thetas=drawn))
    checks.append(_check("pullback-consistency", worst_consistency, 1e-9))
    checks.append(_check("complement-identity", worst_complement, 1e-10))
    return _finish("es-trace", seed, checks)


# -- continued fractions (criterion 5) ---------------------------------------

def cf_exact_suite(seed: int = 0, depth: int = 30, expansions: int = 25) -> dict:
    rng = np.random.default_rng(seed)
    digits = [int(d) for d in rng.integers(1, 20, depth)]
    exp = cfrac.convergents(digits)
    det_ok = all(exp.determinant(n) == (-1) ** (n - 1) for n in range(1, depth + 1))
    checks = [_check("determinant-identity-exact", 0.0 if det_ok else 1.0, 0.0, depth=depth)]

    worst = 0.0
    drawn = 0
    while drawn < expansions:
        theta = float(rng.uniform(0.02, 0.98))
        try:
            ds = cfrac.cf_expand(theta, 12)
        except PrecisionError:
            continue
        drawn += 1
        e = cfrac.convergents(ds)
        ftheta = Fraction(theta)
        for n in range(1, len(ds) + 1):
            margin = abs(ftheta - e.convergent(n)) * e.q[n] ** 2
            worst = max(worst, float(margin))
    checks.append(_check("convergent-quality-q-squared", worst, 1.0 - 1e-15, expansions=drawn))

    # digits -> value -> digits, with an all-ones tail standing in for the
    # irrational continuation; digit sizes kept small enough that q_12 stays
    # inside 64-bit resolution (q^2 well below 2^52)
    trips = 0
    roundtrip_bad = 0
    while trips < 15:
        ds = [int(d) for d in rng.integers(1, 4, 12)]
        deep = cfrac.convergents(list(ds) + [1] * 30)
        theta = float(Fraction(deep.p[-1], deep.q[-1]))
        try:
            back = cfrac.cf_expand(theta, 12)
        except PrecisionError:
            continue
        trips += 1
        if tuple(back) != tuple(ds):
            roundtrip_bad += 1
    checks.append(_check("digit-roundtrip-depth-12", float(roundtrip_bad), 0.0, trips=trips))
    return _finish("cf-exact", seed, checks)


# -- Lip-norm structure (criterion 6) ----------------------------------------

def lip_structure_suite(seed: int = 0, samples: int = 200) -> dict:
    rng = np.random.default_rng(seed)
    checks = []

    beta = beta_geometric(2.0, 6)
    tower = cantor_tower(6, beta)
    data = LipData(tower, beta)
    one = unit(tower.top)
    checks.append(_check("lip-unit-zero", lip(data, one), 0.0))
    worst = max(lip(data, scale(float(t), one)) for t in rng.uniform(-5, 5, 10))
    checks.append(_check("lip-scalar-kernel-exact", worst, 0.0))

    worst = 0.0
    for n in range(6):
        worst = max(worst, abs(lip(data, u_element(tower, n)) - 1.0 / beta[n]))
    checks.append(_check("lip-coordinate-unitaries", worst, 1e-10))

    mu = tower.trace(tower.depth)
    worst = 0.0
    tested = 0
    for t in rng.uniform(-2, 2, 10):
        wiggle = random_selfadjoint(tower.top, rng, scale_=1e-13)
        a = scale(float(t), one) + wiggle
        if lip(data, a) <= 1e-10:
            tested += 1
            worst = max(worst, cstar_norm(a - scale(trace_eval(mu, a).real, one)))
    checks.append(_check("lip-kernel-is-scalars", worst, 1e-8, tested=tested))

    es_tower, es_beta = effros_shen_tower([1, 1, 1, 1], PHI, k=1)
    es_data = LipData(es_tower, es_beta)
    sa = _random_stack(es_tower.top, rng, samples, selfadjoint=True)
    base = lip_batch(es_data, sa)
    worst = 0.0
    for n in range(es_tower.depth + 1):
        op = es_data.expectation(n) if n < es_tower.depth else None
        imgs = op.apply_stack(sa) if op else sa
        imgs = [_hermitize(b) for b in imgs]
        worst = max(worst, float((lip_batch(es_data, imgs) - base).max()))
    checks.append(_check("weak-contraction-under-projections", worst, 1e-9, samples=samples))
    return _finish("lip-structure", seed, checks)


# -- Monge-Kantorovich properties (criterion 7) -------------------------------

def _depth1_m2() -> tuple[InductiveTower, BetaSequence]:
    levels = (FdCStar((1,)), FdCStar((2,)))
    layouts = (EmbeddingLayout(((0, 0),)),)
    traces = (TraceWeights((1.0,)), TraceWeights((1.0,)))
    return InductiveTower(levels, layouts, traces, "depth1-m2"), BetaSequence((1.0, 0.5))


def _brute_force_depth1(phi: StateVec, psi: StateVec, beta0: float, mesh: int = 61) -> float:
    """Grid the traceless Hermitian 2x2 operator-norm ball directly.

    Traceless Hermitian 2x2 matrices with operator norm <= 1 are exactly the
    Euclidean unit ball in the (x, y, z) coordinates used below, so a cube
    mesh clipped to the ball is an honest discretization of the constraint
    set, independent of the dual-norm identity under test.
    """
    delta = phi.density_blocks[0] - psi.density_blocks[0]
    axis = np.linspace(-1.0, 1.0, mesh)
    x, y, z = np.meshgrid(axis, axis, axis, indexing="ij")
    pts = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)
    nrm = np.linalg.norm(pts, axis=1)
    pts = pts / np.maximum(nrm, 1.0)[:, None]
    # tr(delta a) for a = x sx + y sy + z sz
    cx = 2.0 * np.real(delta[1, 0])
    cy = 2.0 * np.imag(delta[1, 0])
    cz = np.real(delta[0, 0] - delta[1, 1])
    vals = np.abs(pts @ np.array([cx, cy, cz]))
    return beta0 * float(vals.max())


def mk_properties_suite(seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    checks = []
    tower, beta = _depth1_m2()
    data = LipData(tower, beta)
    parent = tower.top

    worst = 0.0
    for _ in range(3):
        phi, psi = random_state(parent, rng), random_state(parent, rng)
        cf = mk_depth1_closed_form(beta[0], phi, psi)
        bf = _brute_force_depth1(phi, psi, beta[0])
        worst = max(worst, abs(cf - bf))
    checks.append(_check("closed-form-vs-brute-force", worst, 1e-3))

    worst = 0.0
    diam_worst = 0.0
    tol = 2e-5
    for _ in range(20):
        phi, psi = random_state(parent, rng), random_state(parent, rng)
        cf = mk_depth1_closed_form(beta[0], phi, psi)
        res = mk_general(data, phi, psi, tol=tol)
        worst = max(worst, abs(res.value - cf))
        diam_worst = max(diam_worst, res.upper - 2.0 * beta[0] - tol)
    checks.append(_check("closed-form-vs-cutting-plane", worst, 1e-4))

    sym_worst, tri_worst = 0.0, 0.0
    for _ in range(4):
        f, g, h = (random_state(parent, rng) for _ in range(3))
        dfg = mk_general(data, f, g, tol=tol)
        dgf = mk_general(data, g, f, tol=tol)
        dgh = mk_general(data, g, h, tol=tol)
        dfh = mk_general(data, f, h, tol=tol)
        sym_worst = max(sym_worst, abs(dfg.value - dgf.value) - 2 * tol)
        tri_worst = max(tri_worst, dfh.value - dfg.value - dgh.value - 3 * tol)
        diam_worst = max(
            diam_worst, max(dfg.upper, dgh.upper, dfh.upper) - 2.0 * beta[0] - tol
        )
    checks.append(_check("symmetry", sym_worst, 0.0))
    checks.append(_check("triangle-inequality", tri_worst, 0.0))

    cb = beta_geometric(2.0, 4)
    ct = cantor_tower(4, cb)
    cdata = LipData(ct, cb)
    tri_ab = 0.0
    for _ in range(6):
        f, g, h = (random_state(ct.top, rng) for _ in range(3))
        dfg = mk_abelian(cdata, f, g).value
        dgh = mk_abelian(cdata, g, h).value
        dfh = mk_abelian(cdata, f, h).value
        tri_ab = max(tri_ab, dfh - dfg - dgh)
        diam_worst = max(diam_worst, max(dfg, dgh, dfh) - 2.0 * cb[0])
    checks.append(_check("abelian-triangle-exact", tri_ab, 1e-8))
    checks.append(_check("diameter-ceiling", diam_worst, 0.0))

    # phi . E_n is beta(n)-close to phi, exactly on the Abelian path
    push_worst = 0.0
    for _ in range(4):
        phi = random_state(ct.top, rng)
        for n in range(ct.depth + 1):
            op = ExpectationOperator(ct, n, ct.depth)
            pushed = pushforward_under_expectation(phi, op)
            d = mk_abelian(cdata, phi, pushed).value
            push_worst = max(push_worst, d - cb[n])
    checks.append(_check("projection-pushforward-radius", push_worst, 1e-8))

    agree_worst = 0.0
    cb3 = beta_geometric(2.0, 3)
    ct3 = cantor_tower(3, cb3)
    cdata3 = LipData(ct3, cb3)
    for _ in range(3):
        f, g = random_state(ct3.top, rng), random_state(ct3.top, rng)
        exact = mk_abelian(cdata3, f, g).value
        res = mk_general(cdata3, f, g, tol=tol)
        agree_worst = max(agree_worst, abs(res.value - exact) - tol)
    checks.append(_check("abelian-vs-cutting-plane", agree_worst, 0.0))
    return _finish("mk-properties", seed, checks)


# -- Holder table (criterion 8) ----------------------------------------------

def holder_table(max_prefix: int = 8, ks=(1.0, 2.0)) -> dict:
    """Prefix bounds for multiplier sequences sharing N leading entries."""
    rows = []
    for k in ks:
        prev = None
        for n in range(1, max_prefix + 1):
            ent_a = [1] * (n + 1)
            ent_b = [1] * n + [2]
            ta, ba = uhf_tower(ent_a, k=k)
            tb, bb = uhf_tower(ent_b, k=k)
            bound = prefix_match_bound(ta, ba, tb, bb, n)
            holder = uhf_holder_bound(ent_a, ent_b, k)
            rows.append(
                {
                    "k": k,
                    "prefix": n,
                    "bound": bound.value,
                    "kind": bound.kind,
                    "holder": holder.value,
                    "ceiling": 2.0 * 2.0 ** (-n * k),
                    "monotone": prev is None or bound.value <= prev + 1e-15,
                }
            )
            prev = bound.value
    return {"rows": rows}


def holder_table_suite(seed: int = 0) -> dict:
    table = holder_table()
    worst_ceiling = max(r["bound"] - r["ceiling"] for r in table["rows"])
    mono_ok = all(r["monotone"] for r in table["rows"])
    prefix_ok = all(r["kind"] == "prefix" for r in table["rows"])
    checks = [
        _check("prefix-bound-below-2^(1-Nk)", worst_ceiling, 0.0),
        _check("table-monotone-decreasing", 0.0 if mono_ok else 1.0, 0.0),
        _check("prefix-validation-path", 0.0 if prefix_ok else 1.0, 0.0),
    ]
    return _finish("holder-table", seed, checks)


# -- Effros-Shen continuity sweep (criterion 9) -------------------------------

def theta_near_phi(prefix: int, tail_digit: int = 2, pad: int = 40) -> float:
    digits = [1] * prefix + [tail_digit] + [1] * pad
    exp = cfrac.convergents(digits)
    return float(Fraction(exp.p[-1], exp.q[-1]))


def es_continuity_sweep(
    prefixes=range(2, 9), k: float = 1.0, level: int = 2, h: float = 0.05
) -> dict:
    rows = []
    for m in prefixes:
        theta2 = theta_near_phi(m)
        bound = effros_shen_chain_bound(PHI, theta2, k, level, h)
        rows.append(
            {
                "shared_prefix": m,
                "theta_gap": abs(theta2 - PHI),
                "bound": bound.value,
                "grid_term": bound.params["grid_term"],
                "sampled_diff": bound.params["grid"]["max_diff_sampled"],
                "universal_floor": bound.params["universal_floor"],
                "certified": bound.certified,
            }
        )
    return {"rows": rows, "k": k, "level": level, "h": h}


def es_continuity_suite(seed: int = 0, h: float = 0.05, level: int = 2) -> dict:
    sweep = es_continuity_sweep(h=h, level=level)
    rows = sweep["rows"]
    mono_worst = max(
        (b["bound"] - a["bound"] for a, b in zip(rows, rows[1:])), default=0.0
    )
    at5 = next(r["bound"] for r in rows if r["shared_prefix"] == 5)
    checks = [
        _check("chain-bound-monotone-nonincreasing", mono_worst, 1e-9),
        _check("chain-bound-below-0.05-at-prefix-5", at5, 0.05),
    ]
    out = _finish("es-continuity", seed, checks)
    out["rows"] = rows
    return out


# -- beta continuity sweep (criterion 10) -------------------------------------

def beta_continuity_sweep(depth: int = 4, r: float = 2.0, stages: int = 8) -> dict:
    base = beta_geometric(r, depth)
    tower = cantor_tower(depth, base)
    rows = []
    for j in range(stages + 1):
        perturbed = BetaSequence(
            tuple(
                base[n] if n <= j else 0.5 * base[n] for n in range(depth + 1)
            )
        )
        shared = min(j, depth)
        bound = prefix_match_bound(tower, perturbed, tower, base, shared)
        rows.append(
            {
                "agree_through": j,
                "bound": bound.value,
                "kind": bound.kind,
                "target": 2.0 * base[depth],
            }
        )
    return {"rows": rows, "depth": depth, "r": r}


def beta_continuity_suite(seed: int = 0) -> dict:
    sweep = beta_continuity_sweep()
    rows = sweep["rows"]
    final = rows[-1]["bound"]
    target = rows[-1]["target"]
    checks = [
        _check("bound-settles-below-2beta(N)+0.01", final - (target + 0.01), 0.0),
        _check(
            "bound-monotone-toward-limit",
            max((b["bound"] - a["bound"] for a, b in zip(rows, rows[1:])), default=0.0),
            1e-15,
        ),
    ]
    out = _finish("beta-continuity", seed, checks)
    out["rows"] = rows
    return out


SUITES = {
    "expectation-axioms": expectation_axioms,
    "cantor-oracle": cantor_oracle_suite,
    "quasi-leibniz": quasi_leibniz_suite,
    "es-trace": es_trace_suite,
    "cf-exact": cf_exact_suite,
    "lip-structure": lip_structure_suite,
    "mk-properties": mk_properties_suite,
    "holder-table": holder_table_suite,
    "es-continuity": es_continuity_suite,
    "beta-continuity": beta_continuity_suite,
}


def run_suite(name: str, seed: int = 0) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed=seed)
