"""Inflating explanations: widen each feature to a maximal value set.

Given an abductive explanation X for (v, c), inflation replaces each fixed
value v_j by a set E_j containing it, as large as the sufficiency condition
allows: keeping every explanation feature anywhere inside its set must
still force the prediction.  Features are processed one at a time; earlier
features keep their already widened sets while the current one grows, so
the outcome depends on the processing order (every outcome is maximal,
they just differ).

Per-feature growth comes in three flavours:

* categorical: probe each remaining label once, keep it if sufficiency
  survives (one oracle call per label);
* ordinal, monotone model: grow a closed interval around v_j.  The domain
  bound is probed first; if it fails, walk a delta grid anchored at v_j.
  The upper end grows before the lower end.  Linear, coarse-then-fine, and
  binary searches over the grid return the same endpoint because
  sufficiency is monotone along it;
* ordinal, tree or list model: the model's thresholds cut the domain into
  finitely many cells on which the prediction is constant, so probing whole
  cells is exact and needs no step width.

The reverse direction is `shrink_cxp`: start a contrastive explanation with
every off-instance value allowed, then greedily discard values while a
counterexample still exists inside the narrowed sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .classifiers import DecisionList, DecisionTree, MonotonicClassifier, TreeEnsemble
from .errors import ValidationError
from .explain import ExplanationProblem
from .model import (
    ABDUCTIVE,
    CONTRASTIVE,
    CatSet,
    Categorical,
    INTEGER,
    InflatedExplanation,
    Interval,
    IntervalUnion,
    Ordinal,
    ValueSet,
    full_set,
    interval_union,
    rational,
    vs_is_full,
    vs_union,
)

LINEAR = "linear"
BINARY = "binary"


@dataclass(frozen=True)
class InflationConfig:
    """Knobs for ordinal growth on monotone models.

    delta is the grid step; beta, when set, is a coarse first-pass step for
    the linear strategy and must be a multiple of delta.  order, when set,
    fixes the feature processing order.
    """

    delta: Fraction = Fraction(1, 5)
    beta: Optional[Fraction] = None
    strategy: str = LINEAR
    order: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "delta", rational(self.delta))
        if self.delta <= 0:
            raise ValidationError("delta must be positive")
        if self.strategy not in (LINEAR, BINARY):
            raise ValidationError(f"unknown strategy {self.strategy!r}")
        if self.beta is not None:
            beta = rational(self.beta)
            object.__setattr__(self, "beta", beta)
            if self.strategy != LINEAR:
                raise ValidationError("beta only applies to the linear strategy")
            if beta <= self.delta:
                raise ValidationError("beta must exceed delta")
            if (beta / self.delta).denominator != 1:
                raise ValidationError("beta must be an integer multiple of delta")
        if self.order is not None:
            object.__setattr__(self, "order", tuple(self.order))


def _feature_order(
    features: Sequence[int], config: InflationConfig
) -> tuple[int, ...]:
    feats = tuple(sorted(features))
    if config.order is None:
        return feats
    if sorted(config.order) != sorted(feats):
        raise ValidationError(
            f"order {config.order} is not a permutation of the explanation features {feats}"
        )
    return config.order


def _step_for(domain: Ordinal, config: InflationConfig) -> Fraction:
    # fractional steps leave an integer domain, so round the step up
    if domain.kind == INTEGER:
        return Fraction(max(1, math.ceil(config.delta)))
    return config.delta


def _grid_count(start: Fraction, bound: Fraction, step: Fraction, up: bool) -> int:
    """Number of grid points strictly between start and bound."""
    span = (bound - start) if up else (start - bound)
    k = span / step
    n = k.numerator // k.denominator
    if n * step == span:
        n -= 1
    return max(0, n)


# ---------------------------------------------------------------------------
# Per-feature growth


def inflate_categorical(
    problem: ExplanationProblem,
    j: int,
    current: Mapping[int, ValueSet],
) -> CatSet:
    """Grow feature j's label set from the instance label, one probe each.

    current holds the value sets of the other explanation features; labels
    are probed in domain declaration order.  The result is maximal: any
    label left out was probed against a subset of the final sets, and
    sufficiency can only get harder as sets grow.
    """
    domain = problem.space.domain(j)
    if not isinstance(domain, Categorical):
        raise ValidationError(f"feature {j} is not categorical")
    v = problem.value_of(j)
    kept = {v}
    for label in domain.labels:
        if label in kept:
            continue
        trial = dict(current)
        trial[j] = CatSet(frozenset(kept | {label}))
        if problem.sufficiency_holds(trial):
            kept.add(label)
    return CatSet(frozenset(kept))


def expand_sup(
    problem: ExplanationProblem,
    j: int,
    current: Mapping[int, ValueSet],
    inf: Fraction,
    sup: Fraction,
    config: InflationConfig,
) -> Fraction:
    """Largest grid point p = sup + k*step with [inf, p] still sufficient.

    The grid stops strictly below the domain top; the caller has already
    probed the top directly.  All strategies return the same endpoint.
    """
    domain = problem.space.domain(j)
    step = _step_for(domain, config)

    def holds(k: int) -> bool:
        trial = dict(current)
        trial[j] = IntervalUnion((Interval(inf, sup + k * step, True, True),))
        return problem.sufficiency_holds(trial)

    k_max = _grid_count(sup, domain.hi, step, up=True)
    best = _search_grid(holds, k_max, config, step)
    return sup + best * step


def expand_inf(
    problem: ExplanationProblem,
    j: int,
    current: Mapping[int, ValueSet],
    inf: Fraction,
    sup: Fraction,
    config: InflationConfig,
) -> Fraction:
    """Smallest grid point p = inf - k*step with [p, sup] still sufficient."""
    domain = problem.space.domain(j)
    step = _step_for(domain, config)

    def holds(k: int) -> bool:
        trial = dict(current)
        trial[j] = IntervalUnion((Interval(inf - k * step, sup, True, True),))
        return problem.sufficiency_holds(trial)

    k_max = _grid_count(inf, domain.lo, step, up=False)
    best = _search_grid(holds, k_max, config, step)
    return inf - best * step


def _search_grid(holds, k_max: int, config: InflationConfig, step: Fraction) -> int:
    """Largest k in 0..k_max with holds(k); holds is antitone and holds(0) is true."""
    if k_max == 0:
        return 0
    if config.strategy == BINARY:
        lo, hi = 0, k_max
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if holds(mid):
                lo = mid
            else:
                hi = mid - 1
        return lo
    if config.beta is not None:
        stride = int(config.beta / step)
        if stride * step != config.beta:
            raise ValidationError(
                f"beta {config.beta} is not a multiple of the effective step {step}"
            )
        if stride > 1:
            coarse = 0
            k = stride
            while k <= k_max and holds(k):
                coarse = k
                k += stride
            best = coarse
            k = coarse + 1
            ceiling = min(k_max, coarse + stride - 1)
            while k <= ceiling and holds(k):
                best = k
                k += 1
            return best
    best = 0
    k = 1
    while k <= k_max and holds(k):
        best = k
        k += 1
    return best


def inflate_ordinal(
    problem: ExplanationProblem,
    j: int,
    current: Mapping[int, ValueSet],
    config: InflationConfig,
) -> IntervalUnion:
    """Grow a closed interval around the instance value of feature j.

    The domain top is probed first; only if the full reach fails does the
    grid walk start.  Then the same for the bottom, against the already
    grown upper end.
    """
    domain = problem.space.domain(j)
    if not isinstance(domain, Ordinal):
        raise ValidationError(f"feature {j} is not ordinal")
    v = rational(problem.value_of(j))

    def holds(lo: Fraction, hi: Fraction) -> bool:
        trial = dict(current)
        trial[j] = IntervalUnion((Interval(lo, hi, True, True),))
        return problem.sufficiency_holds(trial)

    sup = v
    if v < domain.hi:
        if holds(v, domain.hi):
            sup = domain.hi
        else:
            sup = expand_sup(problem, j, current, v, v, config)
    inf = v
    if domain.lo < v:
        if holds(domain.lo, sup):
            inf = domain.lo
        else:
            inf = expand_inf(problem, j, current, v, sup, config)
    return IntervalUnion((Interval(inf, sup, True, True),))


def inflate_ordinal_cells(
    problem: ExplanationProblem,
    j: int,
    current: Mapping[int, ValueSet],
) -> IntervalUnion:
    """Grow feature j as a union of discretization cells; exact, no step.

    Starts from the whole cell holding the instance value (the prediction
    cannot distinguish points inside one cell) and probes the cells above
    it in ascending order, then the cells below in descending order.
    """
    domain = problem.space.domain(j)
    if not isinstance(domain, Ordinal):
        raise ValidationError(f"feature {j} is not ordinal")
    disc = problem.oracle.discretization
    cells = disc.cells_for(j)
    seed = disc.cell_index(j, rational(problem.value_of(j)))
    kept = interval_union(domain, [cells[seed]])
    probe_idx = list(range(seed + 1, len(cells))) + list(range(seed - 1, -1, -1))
    for idx in probe_idx:
        candidate = vs_union(domain, kept, IntervalUnion((cells[idx],)))
        trial = dict(current)
        trial[j] = candidate
        if problem.sufficiency_holds(trial):
            kept = candidate
    return kept


# ---------------------------------------------------------------------------
# Whole-explanation inflation


def _uses_grid(problem: ExplanationProblem) -> bool:
    return isinstance(problem.classifier, MonotonicClassifier)


def _inflate_feature(
    problem: ExplanationProblem,
    j: int,
    current: Mapping[int, ValueSet],
    config: InflationConfig,
) -> ValueSet:
    domain = problem.space.domain(j)
    if isinstance(domain, Categorical):
        return inflate_categorical(problem, j, current)
    if _uses_grid(problem):
        return inflate_ordinal(problem, j, current, config)
    return inflate_ordinal_cells(problem, j, current)


def inflate_axp(
    problem: ExplanationProblem,
    axp: Sequence[int],
    config: Optional[InflationConfig] = None,
    trusted: bool = False,
) -> InflatedExplanation:
    """Widen every feature of an abductive explanation to a maximal set.

    axp must be a sufficient feature set; that precondition costs one
    oracle call to check unless trusted is set (set it when the set comes
    straight out of find_axp on the same problem).
    """
    config = config or InflationConfig()
    feats = tuple(sorted(set(axp)))
    if len(feats) != len(tuple(axp)):
        raise ValidationError(f"duplicate features in {tuple(axp)}")
    if not feats:
        raise ValidationError("an abductive explanation cannot be empty here")
    for j in feats:
        problem.space.domain(j)
    if not trusted and not problem.waxp_holds(feats):
        raise ValidationError(f"{feats} is not a sufficient feature set for this instance")
    order = _feature_order(feats, config)
    current: dict[int, ValueSet] = {j: problem.pin(j) for j in feats}
    for j in order:
        grown = _inflate_feature(problem, j, {k: s for k, s in current.items() if k != j}, config)
        current[j] = grown
    delta = config.delta if _uses_grid(problem) else Fraction(0)
    return InflatedExplanation(ABDUCTIVE, feats, dict(current), order, delta)


def inflate_from_full(
    problem: ExplanationProblem,
    config: Optional[InflationConfig] = None,
) -> InflatedExplanation:
    """Inflate starting from every feature pinned; drop the ones that free up.

    A feature whose set grows to the whole domain constrains nothing and
    leaves the explanation.  The surviving sets are sufficient and each is
    maximal given the others; the surviving feature set is not guaranteed
    to be subset-minimal for every model, so extract an explanation first
    when minimality matters.
    """
    config = config or InflationConfig()
    feats = tuple(problem.space.features())
    order = _feature_order(feats, config)
    current: dict[int, ValueSet] = {j: problem.pin(j) for j in feats}
    for j in order:
        grown = _inflate_feature(problem, j, {k: s for k, s in current.items() if k != j}, config)
        if vs_is_full(problem.space.domain(j), grown):
            del current[j]
        else:
            current[j] = grown
    kept = tuple(sorted(current))
    delta = config.delta if _uses_grid(problem) else Fraction(0)
    return InflatedExplanation(ABDUCTIVE, kept, dict(current), order, delta)


# ---------------------------------------------------------------------------
# Contrastive shrinking


def _contrast_pieces(
    problem: ExplanationProblem, j: int, config: InflationConfig
) -> list[ValueSet]:
    """Candidate off-instance pieces for feature j of a contrastive set."""
    domain = problem.space.domain(j)
    v = problem.value_of(j)
    if isinstance(domain, Categorical):
        return [CatSet(frozenset([l])) for l in domain.labels if l != v]
    v = rational(v)
    if _uses_grid(problem):
        step = _step_for(domain, config)
        points = {domain.lo, domain.hi}
        k = 1
        while v + k * step <= domain.hi:
            points.add(v + k * step)
            k += 1
        k = 1
        while v - k * step >= domain.lo:
            points.add(v - k * step)
            k += 1
        points.discard(v)
        return [IntervalUnion((Interval(p, p, True, True),)) for p in sorted(points)]
    disc = problem.oracle.discretization
    seed = disc.cell_index(j, v)
    return [
        interval_union(domain, [cell])
        for idx, cell in enumerate(disc.cells_for(j))
        if idx != seed
    ]


def shrink_cxp(
    problem: ExplanationProblem,
    cxp: Sequence[int],
    config: Optional[InflationConfig] = None,
) -> InflatedExplanation:
    """Narrow a contrastive explanation to minimal off-instance value sets.

    Each feature of the set starts with every candidate value other than
    the instance value (labels, cells, or grid points with the domain
    bounds); pieces are then discarded greedily while a counterexample
    still exists inside the remaining sets, the other features staying at
    the instance.  The greedy pass drives every feature down to a single
    piece: whichever surviving piece carries the remaining counterexamples
    pins that feature.
    """
    config = config or InflationConfig()
    feats = tuple(sorted(set(cxp)))
    if not feats:
        raise ValidationError("a contrastive explanation cannot be empty")
    if len(feats) != len(tuple(cxp)):
        raise ValidationError(f"duplicate features in {tuple(cxp)}")
    if not problem.wcxp_holds(feats):
        raise ValidationError(f"{feats} is not a contrastive feature set for this instance")
    order = _feature_order(feats, config)
    pieces: dict[int, list[ValueSet]] = {
        j: _contrast_pieces(problem, j, config) for j in feats
    }
    fixed = {j: problem.pin(j) for j in problem.space.features() if j not in set(feats)}

    def exists(current: Mapping[int, list[ValueSet]]) -> bool:
        roam = {}
        for j, ps in current.items():
            domain = problem.space.domain(j)
            merged = ps[0]
            for p in ps[1:]:
                merged = vs_union(domain, merged, p)
            roam[j] = merged
        return problem.oracle.exists_counterexample(fixed, roam, problem.target)

    if not exists(pieces):
        raise ValidationError(
            "no counterexample once the instance values are excluded at this granularity"
        )
    for j in order:
        for piece in list(pieces[j]):
            if len(pieces[j]) == 1:
                break
            trimmed = dict(pieces)
            trimmed[j] = [p for p in pieces[j] if p != piece]
            if exists(trimmed):
                pieces[j] = trimmed[j]
    sets = {}
    for j, ps in pieces.items():
        domain = problem.space.domain(j)
        merged = ps[0]
        for p in ps[1:]:
            merged = vs_union(domain, merged, p)
        sets[j] = merged
    delta = config.delta if _uses_grid(problem) else Fraction(0)
    return InflatedExplanation(CONTRASTIVE, feats, sets, order, delta)
