"""Abductive and contrastive explanation extraction.

An abductive explanation (AXp) is a subset-minimal set of features X such
that fixing them at the instance values forces the prediction no matter how
the remaining features move.  A contrastive explanation (CXp) is a
subset-minimal set Y such that freeing only Y admits a point with a
different prediction.  Both come out of a deletion pass: start from all
features and try to discard one at a time, keeping the discard whenever the
defining predicate still holds.  Minimal hitting set duality ties the two
families together and is checked here by exhaustive enumeration on small
problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import FrozenSet, Iterable, Mapping, Optional, Sequence

from .classifiers import Classifier, predict, validate_classifier
from .errors import BudgetExceededError, ValidationError
from .model import FeatureSpace, Instance, Value, ValueSet, singleton_set
from .oracle import Oracle, OracleStats, classifier_is_constant

DEFAULT_SUBSET_BUDGET = 4096


@dataclass
class ExplanationProblem:
    """One instance of one classifier, with the oracle session it uses.

    The instance's class must match the classifier's prediction, and the
    classifier must not be constant; both are checked on construction
    unless skip_checks is set (the benchmark sets it after checking the
    shared classifier once).
    """

    classifier: Classifier
    space: FeatureSpace
    instance: Instance
    skip_checks: bool = False
    oracle: Oracle = field(init=False)

    def __post_init__(self):
        values = self.space.validate_point(self.instance.values)
        self.instance = Instance(values, self.instance.class_id)
        if not self.skip_checks:
            validate_classifier(self.classifier, self.space)
            got = predict(self.classifier, values)
            if got != self.instance.class_id:
                raise ValidationError(
                    f"instance labeled {self.instance.class_id!r} but the model predicts {got!r}"
                )
            if classifier_is_constant(self.classifier, self.space):
                raise ValidationError("constant classifier: nothing to explain")
        self.oracle = Oracle(self.classifier, self.space)

    @classmethod
    def from_point(
        cls, classifier: Classifier, space: FeatureSpace, values: Sequence[Value]
    ) -> "ExplanationProblem":
        point = space.validate_point(values)
        return cls(classifier, space, Instance(point, predict(classifier, point)))

    @property
    def target(self) -> str:
        return self.instance.class_id

    def value_of(self, j: int) -> Value:
        return self.instance.values[j - 1]

    def pin(self, j: int) -> ValueSet:
        """The singleton value set holding the instance value of feature j."""
        return singleton_set(self.space.domain(j), self.value_of(j))

    def waxp_holds(self, features: Iterable[int]) -> bool:
        """Fixing these features at the instance forces the prediction."""
        assignment = {j: self.pin(j) for j in features}
        return self.oracle.holds_sufficiency(assignment, self.target)

    def wcxp_holds(self, features: Iterable[int]) -> bool:
        """Freeing only these features admits a different prediction."""
        free = set(features)
        fixed = {j: self.pin(j) for j in self.space.features() if j not in free}
        from .model import full_set

        roam = {j: full_set(self.space.domain(j)) for j in free}
        return self.oracle.exists_counterexample(fixed, roam, self.target)

    def sufficiency_holds(self, assignment: Mapping[int, ValueSet]) -> bool:
        return self.oracle.holds_sufficiency(assignment, self.target)

    def counterexample_in(self, assignment: Mapping[int, ValueSet]) -> bool:
        return self.oracle.counterexample_in(assignment, self.target)


def _check_order(problem: ExplanationProblem, order: Optional[Sequence[int]]) -> tuple[int, ...]:
    feats = tuple(problem.space.features())
    if order is None:
        return feats
    order = tuple(order)
    if sorted(order) != sorted(feats):
        raise ValidationError(f"order {order} is not a permutation of 1..{problem.space.m}")
    return order


def find_axp(problem: ExplanationProblem, order: Optional[Sequence[int]] = None) -> tuple[int, ...]:
    """One subset-minimal abductive explanation, by a deletion pass.

    Features are tentatively discarded in the given order (each feature
    costs exactly one oracle call), so the order steers which AXp comes out.
    """
    order = _check_order(problem, order)
    kept = set(order)
    for j in order:
        if problem.waxp_holds(kept - {j}):
            kept.discard(j)
    return tuple(sorted(kept))


def find_cxp(problem: ExplanationProblem, order: Optional[Sequence[int]] = None) -> tuple[int, ...]:
    """One subset-minimal contrastive explanation, by a deletion pass.

    The order ranks features by retention preference: discards are attempted
    from the back, so features early in the order survive when possible.
    """
    order = _check_order(problem, order)
    kept = set(order)
    for j in reversed(order):
        if problem.wcxp_holds(kept - {j}):
            kept.discard(j)
    return tuple(sorted(kept))


def enumerate_all(
    problem: ExplanationProblem, max_subsets: int = DEFAULT_SUBSET_BUDGET
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Every AXp and every CXp, by exhaustive subset search.

    Subsets are visited in ascending size with supersets of found
    explanations skipped, so anything that tests positive is minimal.  The
    number of predicate tests is capped by max_subsets; running past the
    cap raises BudgetExceededError with the partial families attached.
    """
    feats = tuple(problem.space.features())
    spent = 0
    partial_box: dict = {"axps": (), "cxps": (), "complete": False}

    def scan(holds, key: str) -> list[FrozenSet[int]]:
        nonlocal spent
        found: list[FrozenSet[int]] = []
        for size in range(1, len(feats) + 1):
            for combo in combinations(feats, size):
                cset = frozenset(combo)
                if any(cset >= f for f in found):
                    continue
                spent += 1
                if spent > max_subsets:
                    partial_box[key] = tuple(tuple(sorted(s)) for s in found)
                    raise BudgetExceededError(
                        f"enumeration exceeded {max_subsets} subset tests",
                        partial=partial_box,
                    )
                if holds(cset):
                    found.append(cset)
        partial_box[key] = tuple(tuple(sorted(s)) for s in found)
        return found

    axps = scan(problem.waxp_holds, "axps")
    cxps = scan(problem.wcxp_holds, "cxps")
    partial_box["complete"] = True
    return (
        tuple(tuple(sorted(s)) for s in axps),
        tuple(tuple(sorted(s)) for s in cxps),
    )


def minimal_hitting_sets(
    family: Iterable[Iterable[int]], max_subsets: int = 1 << 16
) -> tuple[tuple[int, ...], ...]:
    """All minimal hitting sets of a family of non-empty sets.

    Exhaustive by ascending size with superset pruning.  An empty set in
    the family is rejected: nothing can hit it.  An empty family is hit by
    the empty set alone.
    """
    sets = [frozenset(s) for s in family]
    for s in sets:
        if not s:
            raise ValidationError("family contains an empty set; it cannot be hit")
    if not sets:
        return ((),)
    universe = sorted(frozenset().union(*sets))
    found: list[FrozenSet[int]] = []
    spent = 0
    for size in range(1, len(universe) + 1):
        for combo in combinations(universe, size):
            cset = frozenset(combo)
            if any(cset >= f for f in found):
                continue
            spent += 1
            if spent > max_subsets:
                raise BudgetExceededError(f"hitting set search exceeded {max_subsets} tests")
            if all(cset & s for s in sets):
                found.append(cset)
    return tuple(tuple(sorted(s)) for s in found)
