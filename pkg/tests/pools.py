"""Seeded pools of small random problems shared across test modules.

Every pool keeps domains tight enough that the brute-force scans in
bruteforce.py stay cheap: ordinal domains top out at 4 with lattice-point
splits, categorical domains at three or four labels.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

from xinflate.explain import ExplanationProblem
from xinflate.model import Categorical, Instance, Ordinal
from xinflate.synthetic import (
    random_decision_list,
    random_forest,
    random_monotone,
    random_point,
    random_problem,
    random_space,
)


def make_problem(classifier, space, point) -> ExplanationProblem:
    return ExplanationProblem.from_point(classifier, space, point)


@lru_cache(maxsize=None)
def dl_pool(n: int = 200, seed: int = 101):
    """Decision lists, at most 6 rules, 2-3 mixed features."""
    rng = random.Random(seed)

    def maker(r):
        space = random_space(r, r.randint(2, 3), categorical_share=0.5, max_labels=3, hi_choices=(4,))
        return random_decision_list(r, space, max_rules=6), space

    return tuple(random_problem(rng, maker) for _ in range(n))


@lru_cache(maxsize=None)
def forest_pool(n: int = 150, seed: int = 202, n_trees_max: int = 7, depth: int = 3):
    """Tree ensembles with integer split points on [0, 4] domains."""
    rng = random.Random(seed)

    def maker(r):
        while True:
            space = random_space(
                r, r.randint(2, 4), categorical_share=0.35, max_labels=3, hi_choices=(4,)
            )
            if any(isinstance(d, Ordinal) for d in space.domains):
                break
        forest = random_forest(
            r, space, n_trees=r.randrange(2, n_trees_max + 1, 2) + 1, depth=depth,
            lattice_step=Fraction(1),
        )
        return forest, space

    return tuple(random_problem(rng, maker) for _ in range(n))


@lru_cache(maxsize=None)
def monotone_pool(n: int = 150, seed: int = 303):
    """Linear threshold models over 2-3 ordinal features."""
    rng = random.Random(seed)

    def maker(r):
        return random_monotone(r, r.randint(2, 3), n_classes=r.choice((2, 2, 3)))

    return tuple(random_problem(rng, maker) for _ in range(n))


@lru_cache(maxsize=None)
def categorical_pool(n: int = 50, seed: int = 404):
    """Purely categorical decision lists, 3-4 features."""
    rng = random.Random(seed)

    def maker(r):
        space = random_space(r, r.randint(3, 4), categorical_share=1.0, max_labels=3)
        return random_decision_list(r, space, max_rules=6), space

    return tuple(random_problem(rng, maker) for _ in range(n))


def soundness_pool():
    """The criterion-wide mixed pool: 500 problems."""
    return dl_pool() + forest_pool() + monotone_pool()
