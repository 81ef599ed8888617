"""Inductive towers of block algebras with explicit embedding layouts.

A tower is a finite list of FdCStar levels starting at the scalars, one
unital injective embedding layout per consecutive pair, and compatible trace
weights on every level.  Constructors cover the three families the rest of
the package studies: single-block towers with multiplicative dimension
growth, the continued-fraction towers M(q_n) + M(q_{n-1}), and the Abelian
binary-refinement tower.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import cfrac
from .algebra import BlockElement, FdCStar, TraceWeights
from .errors import PrecisionError, ValidationError

TRACE_CONSISTENCY_TOL = 1e-10
ES_MAX_DENOMINATOR = 10**7


@dataclass(frozen=True)
class EmbeddingLayout:
    """For each target block, the ordered source blocks stacked on its diagonal."""

    target_lists: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        lists = tuple(tuple(int(s) for s in lst) for lst in self.target_lists)
        object.__setattr__(self, "target_lists", lists)

    def validate(self, source: FdCStar, target: FdCStar) -> list[str]:
        problems = []
        if len(self.target_lists) != target.n_blocks:
            problems.append("layout has wrong number of target lists")
            return problems
        seen = set()
        for j, lst in enumerate(self.target_lists):
            if not lst:
                problems.append(f"target block {j} receives no sources")
                continue
            if any(s < 0 or s >= source.n_blocks for s in lst):
                problems.append(f"target block {j} lists an out-of-range source")
                continue
            seen.update(lst)
            total = sum(source.block_dims[s] for s in lst)
            if total != target.block_dims[j]:
                problems.append(
                    f"target block {j}: source dims sum to {total}, "
                    f"expected {target.block_dims[j]} (not unital)"
                )
        missing = set(range(source.n_blocks)) - seen
        if missing:
            problems.append(f"source blocks {sorted(missing)} never embedded (not injective)")
        return problems

    def multiplicity(self, source: FdCStar, target: FdCStar) -> np.ndarray:
        """m[j, i] = number of times source block i appears in target block j."""
        m = np.zeros((target.n_blocks, source.n_blocks), dtype=np.int64)
        for j, lst in enumerate(self.target_lists):
            for s in lst:
                m[j, s] += 1
        return m


@dataclass(frozen=True)
class BetaSequence:
    """Positive weights beta(0..N); optional tag for the dimension-power rule."""

    values: tuple[float, ...]
    rule: Optional[str] = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(v <= 0.0 for v in vals):
            raise ValidationError("beta values must be positive")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, n: int) -> float:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    @property
    def is_decreasing(self) -> bool:
        return all(a >= b for a, b in zip(self.values, self.values[1:]))

    def require_decreasing(self):
        if not self.is_decreasing:
            raise ValidationError("a decreasing beta sequence is required here")


@dataclass(frozen=True)
class InductiveTower:
    levels: tuple[FdCStar, ...]
    layouts: tuple[EmbeddingLayout, ...]
    trace_levels: tuple[TraceWeights, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.levels) < 1:
            raise ValidationError("a tower needs at least one level")
        if self.levels[0].block_dims != (1,):
            raise ValidationError("level 0 must be the scalars (single block of dim 1)")
        if len(self.layouts) != len(self.levels) - 1:
            raise ValidationError("need one layout per consecutive pair of levels")
        if len(self.trace_levels) != len(self.levels):
            raise ValidationError("need one trace per level")

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def top(self) -> FdCStar:
        return self.levels[-1]

    def trace(self, n: int) -> TraceWeights:
        return self.trace_levels[n]

    @property
    def is_abelian(self) -> bool:
        return all(d == 1 for lvl in self.levels for d in lvl.block_dims)


def embed_once(tower: InductiveTower, a: BlockElement, n: int) -> BlockElement:
    """Apply the level-n -> level-(n+1) layout to an element of level n."""
    source = tower.levels[n]
    target = tower.levels[n + 1]
    if a.parent != source:
        raise ValidationError(f"element does not live at level {n}")
    layout = tower.layouts[n]
    blocks = []
    for j, lst in enumerate(layout.target_lists):
        d = target.block_dims[j]
        out = np.zeros((d, d), dtype=np.complex128)
        pos = 0
        for s in lst:
            ds = source.block_dims[s]
            out[pos : pos + ds, pos : pos + ds] = a.blocks[s]
            pos += ds
        blocks.append(out)
    return BlockElement(target, tuple(blocks))


def embed(tower: InductiveTower, a: BlockElement, n: int, m: int) -> BlockElement:
    """Compose layouts to carry an element from level n up to level m."""
    if not 0 <= n <= m <= tower.depth:
        raise ValidationError(f"levels must satisfy 0 <= {n} <= {m} <= {tower.depth}")
    out = a
    for k in range(n, m):
        out = embed_once(tower, out, k)
    return out


@dataclass
class ValidationReport:
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, level: int, kind: str, detail: str, residual: float = 0.0):
        self.violations.append(
            {"level": level, "kind": kind, "detail": detail, "residual": residual}
        )


def validate(tower: InductiveTower) -> ValidationReport:
    """Check unitality, injectivity and the trace-consistency identity."""
    report = ValidationReport()
    if tower.levels[0].block_dims != (1,):
        report.add(0, "base", "level 0 is not the scalars")
    for n in range(tower.depth):
        source, target = tower.levels[n], tower.levels[n + 1]
        for msg in tower.layouts[n].validate(source, target):
            report.add(n, "layout", msg)
    for n in range(tower.depth):
        source, target = tower.levels[n], tower.levels[n + 1]
        mult = tower.layouts[n].multiplicity(source, target)
        w_lo = tower.trace_levels[n].block_factors(source)
        w_hi = tower.trace_levels[n + 1].block_factors(target)
        resid = np.abs(w_lo - mult.T @ w_hi)
        worst = float(resid.max()) if resid.size else 0.0
        if worst > TRACE_CONSISTENCY_TOL:
            report.add(
                n,
                "trace-consistency",
                f"t_i/d_i at level {n} disagrees with its pullback from level {n + 1}",
                worst,
            )
    return report


# -- constructors -----------------------------------------------------------

def _boxtimes(entries: Sequence[int]) -> list[int]:
    dims = [1]
    for e in entries:
        dims.append(dims[-1] * (e + 1))
    return dims


def uhf_tower(entries: Sequence[int], depth: Optional[int] = None, k: float = 1.0):
    """Single-block tower of dims prod_{j<n}(entries[j]+1), with weights dim^(-k).

    Returns (tower, beta) where beta(n) = dim(level n)^(-k); entries must be
    >= 1 so every multiplicity is >= 2.
    """
    entries = tuple(int(e) for e in entries)
    if depth is None:
        depth = len(entries)
    if depth < 1 or depth > len(entries):
        raise ValidationError(f"depth must be in 1..{len(entries)}")
    if any(e < 1 for e in entries):
        raise ValidationError("multiplier entries must be >= 1")
    if k <= 0:
        raise ValidationError("k must be positive")
    dims = _boxtimes(entries[:depth])
    levels = tuple(FdCStar((d,)) for d in dims)
    layouts = tuple(
        EmbeddingLayout(((0,) * (dims[n + 1] // dims[n]),)) for n in range(depth)
    )
    traces = tuple(TraceWeights((1.0,)) for _ in range(depth + 1))
    beta = BetaSequence(
        tuple(float(d) ** (-k) for d in dims), rule=f"dim-power:{k:g}"
    )
    label = "uhf:" + ",".join(str(e) for e in entries[:depth])
    return InductiveTower(levels, layouts, traces, label), beta


def effros_shen_trace_weight(exp: cfrac.CfExpansion, theta: float, n: int) -> float:
    """t(theta, n) = (-1)^(n-1) q_n (theta q_{n-1} - p_{n-1}).

    Evaluated in exact rational arithmetic on the (exactly rational) 64-bit
    theta, then rounded once: the products theta q_n q_{n-1} would otherwise
    eat up to q_n q_{n-1} ulps of precision.
    """
    from fractions import Fraction

    t = (-1) ** (n - 1) * exp.q[n] * (Fraction(theta) * exp.q[n - 1] - exp.p[n - 1])
    return float(t)


def effros_shen_tower(digits: Sequence[int], theta: float, k: float = 1.0):
    """Tower with levels M(q_n) + M(q_{n-1}) and the K-theory trace weights.

    theta must be bracketed by the convergents of the digits, and the
    denominators are capped at 10^7 so 64-bit roundoff in theta perturbs the
    weights by well under 1e-8.
    """
    if k <= 0:
        raise ValidationError("k must be positive")
    exp = cfrac.convergents(digits)
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise ValidationError(f"theta must lie in (0,1), got {theta!r}")
    if exp.q[-1] > ES_MAX_DENOMINATOR:
        raise PrecisionError(
            f"q_N = {exp.q[-1]} exceeds {ES_MAX_DENOMINATOR}; "
            "trace weights would not be reliable in 64-bit arithmetic"
        )
    if not cfrac.bracket_check(exp, theta):
        raise ValidationError(
            "theta is not bracketed by the convergents of the supplied digits"
        )
    depth = exp.depth
    levels = [FdCStar((1,))]
    layouts = []
    traces = [TraceWeights((1.0,))]
    betas = [1.0]
    for n in range(1, depth + 1):
        qn, qm = exp.q[n], exp.q[n - 1]
        levels.append(FdCStar((qn, qm)))
        if n == 1:
            # unique unital morphism from the scalars
            layouts.append(EmbeddingLayout(((0,) * qn, (0,) * qm)))
        else:
            r = exp.digits[n - 1]
            layouts.append(EmbeddingLayout(((0,) * r + (1,), (0,))))
        t = effros_shen_trace_weight(exp, theta, n)
        if not 0.0 < t < 1.0:
            raise PrecisionError(f"trace weight t(theta,{n}) = {t!r} fell outside (0,1)")
        traces.append(TraceWeights((t, 1.0 - t)))
        betas.append(float(qn * qn + qm * qm) ** (-k))
    label = f"effros-shen:theta={theta!r}"
    beta = BetaSequence(tuple(betas), rule=f"dim-power:{k:g}")
    return InductiveTower(tuple(levels), tuple(layouts), tuple(traces), label), beta


def cantor_tower(depth: int, beta: BetaSequence) -> InductiveTower:
    """Abelian binary tower: level n = functions on words of length n.

    Block order is by word value with the first coordinate most significant;
    trace weights are the uniform 2^(-n).
    """
    if depth < 0:
        raise ValidationError("depth must be >= 0")
    if len(beta) < depth + 1:
        raise ValidationError(f"beta needs at least {depth + 1} entries")
    levels = [FdCStar(tuple([1] * (1 << n))) for n in range(depth + 1)]
    layouts = [
        EmbeddingLayout(tuple((j // 2,) for j in range(1 << (n + 1))))
        for n in range(depth)
    ]
    traces = [TraceWeights(tuple([1.0 / (1 << n)] * (1 << n))) for n in range(depth + 1)]
    return InductiveTower(tuple(levels), tuple(layouts), tuple(traces), f"cantor:{depth}")


def beta_geometric(r: float, depth: int) -> BetaSequence:
    """beta_r(n) = r^(-n) / 2, the weights recovering the standard ultrametrics."""
    if r <= 1.0:
        raise ValidationError("r must exceed 1")
    return BetaSequence(tuple(0.5 * r ** (-n) for n in range(depth + 1)), rule=f"geometric:{r:g}")


# -- tower-spec files -------------------------------------------------------

def tower_to_spec(tower: InductiveTower, beta: Optional[BetaSequence] = None) -> dict:
    spec = {
        "levels": [list(lvl.block_dims) for lvl in tower.levels],
        "layouts": [[list(lst) for lst in lay.target_lists] for lay in tower.layouts],
        "trace": {
            "kind": "explicit",
            "weights": [list(tr.weights) for tr in tower.trace_levels],
        },
        "label": tower.label,
    }
    if beta is not None:
        spec["beta"] = {"kind": "explicit", "values": list(beta.values)}
    return spec


def tower_from_spec(spec: dict):
    """Build (tower, beta_or_None) from the JSON tower-spec layout.

    Constructor kinds ("uhf", "effros-shen", "cantor") take their parameters
    from the trace entry; "explicit" reads levels/layouts/weights verbatim.
    """
    trace = spec.get("trace", {})
    kind = trace.get("kind", "explicit")
    beta_spec = spec.get("beta")

    if kind == "uhf":
        k = float(beta_spec.get("k", 1.0)) if beta_spec else 1.0
        return uhf_tower(trace["mult"], k=k)
    if kind == "effros-shen":
        k = float(beta_spec.get("k", 1.0)) if beta_spec else 1.0
        return effros_shen_tower(trace["digits"], float(trace["theta"]), k=k)
    if kind == "cantor":
        depth = int(trace["depth"])
        if beta_spec is None:
            raise ValidationError("cantor towers need an explicit beta or r parameter")
        if beta_spec.get("kind") == "geometric":
            beta = beta_geometric(float(beta_spec["r"]), depth)
        else:
            beta = BetaSequence(tuple(float(v) for v in beta_spec["values"]))
        return cantor_tower(depth, beta), beta
    if kind != "explicit":
        raise ValidationError(f"unknown trace kind {kind!r}")

    levels = tuple(FdCStar(tuple(int(d) for d in dims)) for dims in spec["levels"])
    layouts = tuple(
        EmbeddingLayout(tuple(tuple(int(s) for s in lst) for lst in lay))
        for lay in spec["layouts"]
    )
    traces = tuple(TraceWeights(tuple(float(w) for w in ws)) for ws in trace["weights"])
    tower = InductiveTower(levels, layouts, traces, spec.get("label", "explicit"))
    beta = None
    if beta_spec is not None:
        if beta_spec.get("kind") == "dim-power":
            k = float(beta_spec["k"])
            beta = BetaSequence(
                tuple(float(lvl.total_dim) ** (-k) for lvl in levels),
                rule=f"dim-power:{k:g}",
            )
        else:
            beta = BetaSequence(tuple(float(v) for v in beta_spec["values"]))
    return tower, beta
