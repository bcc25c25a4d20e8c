"""Duality between inflated abductive and contrastive explanations.

Plain AXps and CXps are minimal hitting sets of one another.  The inflated
forms keep a trace of that: for an inflated abductive explanation (X, E)
and an inflated contrastive one (Y, G) of the same instance, some feature
j in X intersect Y has disjoint sets, E_j and G_j cannot overlap.  Were
every intersection inhabited, a point mixing shared values, contrastive
values, and instance values would have to take the prediction and a
different class at once.

The constructions here cross the families.  A selector theta picks one
feature from each inflated abductive explanation; the chosen features form
Y and each G_j intersects the complements of the E_j sets that chose j.
The mirror construction phi builds an abductive candidate from contrastive
ones.  Neither construction is guaranteed valid for every model, so both
are validated against their defining condition and raise
DualityConstructionError carrying the failed candidate; the abductive
direction re-runs per-feature maximality afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Optional, Sequence, Union

from .classifiers import MonotonicClassifier, predict
from .errors import BudgetExceededError, DualityConstructionError, ValidationError
from .explain import ExplanationProblem, minimal_hitting_sets
from .inflate import InflationConfig, _contrast_pieces, _step_for
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
    interval_union,
    vs_contains,
    vs_complement,
    vs_intersect,
    vs_subset,
    vs_union,
)

Selector = Union[Sequence[int], Callable[[InflatedExplanation], int]]


@dataclass(frozen=True)
class ExplanationSets:
    """The complete AXp and CXp families of one problem instance."""

    axps: tuple[tuple[int, ...], ...]
    cxps: tuple[tuple[int, ...], ...]

    def mhs_dual(self) -> bool:
        """Each family is exactly the minimal hitting sets of the other."""
        axp_sets = {frozenset(a) for a in self.axps}
        cxp_sets = {frozenset(c) for c in self.cxps}
        from_cxps = {frozenset(h) for h in minimal_hitting_sets(self.cxps)}
        from_axps = {frozenset(h) for h in minimal_hitting_sets(self.axps)}
        return axp_sets == from_cxps and cxp_sets == from_axps


def check_hits(
    problem: ExplanationProblem,
    iaxp: InflatedExplanation,
    icxp: InflatedExplanation,
) -> Optional[int]:
    """The lowest shared feature whose sets are disjoint, or None.

    None signals a violation of the expected disjointness and is worth
    reporting together with the pair that produced it.
    """
    if iaxp.kind != ABDUCTIVE or icxp.kind != CONTRASTIVE:
        raise ValidationError("check_hits wants an abductive and a contrastive explanation")
    for j in sorted(set(iaxp.features) & set(icxp.features)):
        domain = problem.space.domain(j)
        if vs_intersect(domain, iaxp.set_for(j), icxp.set_for(j)) is None:
            return j
    return None


def _picks(iaxps: Sequence[InflatedExplanation], selector: Selector, kind: str) -> list[int]:
    if callable(selector):
        picks = [selector(e) for e in iaxps]
    else:
        picks = list(selector)
    if len(picks) != len(iaxps):
        raise ValidationError(f"{len(picks)} picks for {len(iaxps)} explanations")
    for e, j in zip(iaxps, picks):
        if e.kind != kind:
            raise ValidationError(f"expected only {kind} explanations")
        if j not in e.features:
            raise ValidationError(f"selected feature {j} is not in the explanation {e.features}")
    return picks


def icxp_from_iaxps(
    problem: ExplanationProblem,
    iaxps: Sequence[InflatedExplanation],
    selector: Selector,
) -> InflatedExplanation:
    """Build an inflated contrastive explanation from abductive ones.

    The selector picks one feature per abductive explanation; each picked
    feature gets the intersection of the complements of the sets that chose
    it.  The candidate is validated (a counterexample must exist inside the
    sets with everything else at the instance) and then minimized feature
    wise; the value sets themselves are not narrowed further.
    """
    if not iaxps:
        raise ValidationError("no abductive explanations given")
    picks = _picks(iaxps, selector, ABDUCTIVE)
    sets: dict[int, ValueSet] = {}
    for e, j in zip(iaxps, picks):
        domain = problem.space.domain(j)
        comp = vs_complement(domain, e.set_for(j))
        if comp is None:
            raise DualityConstructionError(
                f"feature {j} expands to its whole domain; its complement is empty",
                candidate=(tuple(picks), None),
            )
        if j in sets:
            inter = vs_intersect(domain, sets[j], comp)
            if inter is None:
                raise DualityConstructionError(
                    f"feature {j}: the selected complements have empty intersection",
                    candidate=(tuple(picks), dict(sets)),
                )
            sets[j] = inter
        else:
            sets[j] = comp
    feats = tuple(sorted(sets))
    candidate = InflatedExplanation(CONTRASTIVE, feats, dict(sets))

    def exists_with(live: dict[int, ValueSet]) -> bool:
        fixed = {j: problem.pin(j) for j in problem.space.features() if j not in live}
        return problem.oracle.exists_counterexample(fixed, live, problem.target)

    if not exists_with(sets):
        raise DualityConstructionError(
            "no counterexample inside the constructed contrastive sets",
            candidate=candidate,
        )
    for j in feats:
        if len(sets) == 1:
            break
        trimmed = {k: s for k, s in sets.items() if k != j}
        if exists_with(trimmed):
            sets = trimmed
    return InflatedExplanation(CONTRASTIVE, tuple(sorted(sets)), dict(sets))


def iaxp_from_icxps(
    problem: ExplanationProblem,
    icxps: Sequence[InflatedExplanation],
    selector: Selector,
) -> InflatedExplanation:
    """Build an inflated abductive explanation from contrastive ones.

    The selector picks one feature per contrastive explanation; each picked
    feature gets the intersection of the complements of the sets that chose
    it (these always contain the instance value).  The candidate must be
    sufficient; afterwards each feature's set is topped up to maximality by
    re-probing missing labels or cells.  Sets of monotone models are only
    validated: the construction can puncture an interval, and interval
    growth does not apply to a punctured set.
    """
    if not icxps:
        raise ValidationError("no contrastive explanations given")
    picks = _picks(icxps, selector, CONTRASTIVE)
    sets: dict[int, ValueSet] = {}
    for e, j in zip(icxps, picks):
        domain = problem.space.domain(j)
        comp = vs_complement(domain, e.set_for(j))
        if comp is None:
            raise DualityConstructionError(
                f"feature {j}: a contrastive set covering the whole domain is malformed",
                candidate=(tuple(picks), None),
            )
        if j in sets:
            inter = vs_intersect(domain, sets[j], comp)
            if inter is None:
                raise DualityConstructionError(
                    f"feature {j}: the selected complements have empty intersection",
                    candidate=(tuple(picks), dict(sets)),
                )
            sets[j] = inter
        else:
            sets[j] = comp
    for j, s in sets.items():
        if not vs_contains(s, problem.value_of(j)):
            raise DualityConstructionError(
                f"feature {j}: constructed set omits the instance value",
                candidate=(tuple(picks), dict(sets)),
            )
    feats = tuple(sorted(sets))
    candidate = InflatedExplanation(ABDUCTIVE, feats, dict(sets))
    if not problem.sufficiency_holds(sets):
        raise DualityConstructionError(
            "constructed sets are not sufficient for the prediction",
            candidate=candidate,
        )
    for j in feats:
        domain = problem.space.domain(j)
        others = {k: s for k, s in sets.items() if k != j}
        if isinstance(domain, Categorical):
            kept = set(sets[j].labels)
            for label in domain.labels:
                if label in kept:
                    continue
                trial = dict(others)
                trial[j] = CatSet(frozenset(kept | {label}))
                if problem.sufficiency_holds(trial):
                    kept.add(label)
            sets[j] = CatSet(frozenset(kept))
        elif not isinstance(problem.classifier, MonotonicClassifier):
            disc = problem.oracle.discretization
            grown = sets[j]
            for cell in disc.cells_for(j):
                cell_set = interval_union(domain, [cell])
                if vs_subset(domain, cell_set, grown):
                    continue
                trial = dict(others)
                trial[j] = vs_union(domain, grown, cell_set)
                if problem.sufficiency_holds(trial):
                    grown = trial[j]
            sets[j] = grown
    return InflatedExplanation(ABDUCTIVE, feats, dict(sets))


def plain_contrast_holds(
    problem: ExplanationProblem,
    iaxp: InflatedExplanation,
    features: Iterable[int],
) -> bool:
    """The weak contrastive condition for Y against an inflated AXp.

    Holds when some point whose non-Y features stay inside their inflated
    sets (features outside the explanation roam free) gets another class.
    Implied by the strong per-feature form; kept for analysis.
    """
    ys = set(features)
    assignment = {
        j: iaxp.set_for(j) for j in iaxp.features if j not in ys
    }
    return problem.counterexample_in(assignment)


# ---------------------------------------------------------------------------
# Exhaustive enumeration of the inflated families (small problems)


def _axp_feature_options(
    problem: ExplanationProblem, j: int, config: InflationConfig
) -> list[ValueSet]:
    domain = problem.space.domain(j)
    v = problem.value_of(j)
    if isinstance(domain, Categorical):
        rest = [l for l in domain.labels if l != v]
        out = []
        for size in range(len(rest) + 1):
            for combo in combinations(rest, size):
                out.append(CatSet(frozenset((v,) + combo)))
        return out
    from .model import rational

    v = rational(v)
    if isinstance(problem.classifier, MonotonicClassifier):
        step = _step_for(domain, config)
        lows = {domain.lo}
        k = 0
        while v - k * step >= domain.lo:
            lows.add(v - k * step)
            k += 1
        highs = {domain.hi}
        k = 0
        while v + k * step <= domain.hi:
            highs.add(v + k * step)
            k += 1
        return [
            IntervalUnion((Interval(a, b, True, True),))
            for a in sorted(lows)
            for b in sorted(highs)
            if a <= v <= b
        ]
    disc = problem.oracle.discretization
    cells = disc.cells_for(j)
    seed = disc.cell_index(j, v)
    rest_idx = [i for i in range(len(cells)) if i != seed]
    out = []
    for size in range(len(rest_idx) + 1):
        for combo in combinations(rest_idx, size):
            chosen = [cells[i] for i in (seed,) + combo]
            out.append(interval_union(domain, chosen))
    return out


def _is_locally_maximal(
    problem: ExplanationProblem,
    sets: dict[int, ValueSet],
    config: InflationConfig,
) -> bool:
    for j, s in sets.items():
        domain = problem.space.domain(j)
        others = {k: t for k, t in sets.items() if k != j}
        if isinstance(domain, Categorical):
            for label in domain.labels:
                if label in s.labels:
                    continue
                trial = dict(others)
                trial[j] = CatSet(s.labels | {label})
                if problem.sufficiency_holds(trial):
                    return False
        elif isinstance(problem.classifier, MonotonicClassifier):
            iv = s.intervals[0]
            step = _step_for(domain, config)
            if iv.hi < domain.hi:
                trial = dict(others)
                trial[j] = IntervalUnion((Interval(iv.lo, min(domain.hi, iv.hi + step), True, True),))
                if problem.sufficiency_holds(trial):
                    return False
            if iv.lo > domain.lo:
                trial = dict(others)
                trial[j] = IntervalUnion((Interval(max(domain.lo, iv.lo - step), iv.hi, True, True),))
                if problem.sufficiency_holds(trial):
                    return False
        else:
            disc = problem.oracle.discretization
            for cell in disc.cells_for(j):
                cell_set = interval_union(domain, [cell])
                if vs_subset(domain, cell_set, s):
                    continue
                trial = dict(others)
                trial[j] = vs_union(domain, s, cell_set)
                if problem.sufficiency_holds(trial):
                    return False
    return True


def enumerate_iaxps(
    problem: ExplanationProblem,
    axp: Sequence[int],
    config: Optional[InflationConfig] = None,
    max_candidates: int = 4096,
) -> tuple[InflatedExplanation, ...]:
    """Every locally maximal inflation of one abductive explanation.

    Exhausts the per-feature candidate sets (label subsets, cell unions, or
    grid intervals) and keeps the sufficient, locally maximal combinations.
    Greedy inflation returns one member of this family per probe order;
    the family can hold more.
    """
    config = config or InflationConfig()
    feats = tuple(sorted(set(axp)))
    options = [_axp_feature_options(problem, j, config) for j in feats]
    total = 1
    for opts in options:
        total *= len(opts)
    if total > max_candidates:
        raise BudgetExceededError(
            f"{total} candidate set families exceed the cap of {max_candidates}"
        )
    out = []
    for combo in product(*options):
        sets = dict(zip(feats, combo))
        if not problem.sufficiency_holds(sets):
            continue
        if not _is_locally_maximal(problem, sets, config):
            continue
        out.append(
            InflatedExplanation(
                ABDUCTIVE,
                feats,
                sets,
                (),
                config.delta if isinstance(problem.classifier, MonotonicClassifier) else Fraction(0),
            )
        )
    return tuple(out)


def enumerate_icxps(
    problem: ExplanationProblem,
    cxp: Sequence[int],
    config: Optional[InflationConfig] = None,
    max_candidates: int = 4096,
) -> tuple[InflatedExplanation, ...]:
    """Every single-piece contrastive witness family over one CXp.

    Each feature of the explanation takes one off-instance piece (a label,
    a cell, or a grid point); a combination whose representative point
    flips the prediction is a valid contrastive family because the
    prediction is constant on the piece product.
    """
    config = config or InflationConfig()
    feats = tuple(sorted(set(cxp)))
    options = [_contrast_pieces(problem, j, config) for j in feats]
    total = 1
    for opts in options:
        total *= len(opts)
    if total > max_candidates:
        raise BudgetExceededError(
            f"{total} witness combinations exceed the cap of {max_candidates}"
        )
    base = list(problem.instance.values)
    out = []
    for combo in product(*options):
        point = list(base)
        for j, piece in zip(feats, combo):
            if isinstance(piece, CatSet):
                (label,) = piece.labels
                point[j - 1] = label
            else:
                iv = piece.intervals[0]
                domain = problem.space.domain(j)
                if domain.kind == INTEGER or iv.lo == iv.hi:
                    point[j - 1] = iv.lo
                else:
                    point[j - 1] = (iv.lo + iv.hi) / 2
        if predict(problem.classifier, tuple(point)) != problem.target:
            out.append(
                InflatedExplanation(
                    CONTRASTIVE,
                    feats,
                    dict(zip(feats, combo)),
                    (),
                    config.delta if isinstance(problem.classifier, MonotonicClassifier) else Fraction(0),
                )
            )
    return tuple(out)
