"""
suites/commutation.py  –  Twists about disjoint curves: conjugation moves the
twist curve, a twist fixes exactly the curves it misses, and two multitwists
commute exactly when their supports are disjoint.
"""

import random
from itertools import combinations, combinations_with_replacement
from typing import List, Sequence, Tuple

from topology.chains import alexander_chain
from topology.curves import intersection, same_curve
from topology.models import CaseResult, Chain, Curve, MappingClass, SuiteConfig
from topology.realize import SurfaceModel, surface_model
from topology.surface import exhaustion_for
from topology.twists import apply, commutes, equal_mc
from suites.common import guarded, sample

MAX_SUPPORT = 3


def supports(chain: Chain, n: int, size: int = MAX_SUPPORT) -> List[Tuple[str, ...]]:
    """Pairwise disjoint subsets of 𝒜ₙ with 1..size curves."""
    names = chain.restrict(n).names
    out = []
    for k in range(1, size + 1):
        for subset in combinations(names, k):
            if all(chain.value(a, b) == 0 for a, b in combinations(subset, 2)):
                out.append(subset)
    return out


def multitwist(support: Sequence[str], rng: random.Random) -> MappingClass:
    return MappingClass.of(*[(a, rng.choice((1, -1))) for a in support])


def _fix_cases(model: SurfaceModel, n: int, cfg, rng) -> List[CaseResult]:
    curves = [Curve.named(a) for a in model.chain_names(n)]
    out = []
    for a, b in sample(list(combinations(curves, 2)), cfg, rng):
        def check(a=a, b=b):
            i = intersection(a, b, model)
            fixed = same_curve(apply(MappingClass.twist(a), b, model), b, model)
            return fixed == (i == 0), f"i={i}, fixed={fixed}"

        out.append(guarded(f"fixes/{a.label}/{b.label}", check))
    return out


def _conjugation_cases(model: SurfaceModel, n: int, cfg, rng) -> List[CaseResult]:
    curves = [Curve.named(a) for a in model.chain_names(n)]
    out = []
    for f, a in sample(list(combinations(curves, 2)), cfg, rng):
        k = rng.choice((1, -1))

        def check(f=f, a=a, k=k):
            tf = MappingClass.twist(f, k)
            moved = apply(tf, a, model)
            ok = equal_mc(tf * MappingClass.twist(a) * tf.inverse(), MappingClass.twist(moved), n, model)
            return ok, f"t_{f.label}^{k} conjugates t_{a.label} to t_{moved.label}"

        out.append(guarded(f"conjugation/{f.label}/{a.label}", check))
    return out


def _commutation_cases(model: SurfaceModel, n: int, cfg, rng) -> List[CaseResult]:
    chain = alexander_chain(model.exhaustion)
    pairs = sample(list(combinations_with_replacement(supports(chain, n), 2)), cfg, rng)
    out = []
    for index, (A, B) in enumerate(pairs):
        ta, tb = multitwist(A, rng), multitwist(B, rng)

        def check(A=A, B=B, ta=ta, tb=tb):
            disjoint = all(chain.value(a, b) == 0 for a in A for b in B)
            result = commutes(ta, tb, n, model)
            return result == disjoint, f"{'+'.join(A)} | {'+'.join(B)}: commutes={result}, disjoint={disjoint}"

        out.append(guarded(f"commutes/{index:05d}", check))
    return out


def run(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    n = min(max(cfg.stages, 2), 3)
    model = surface_model(exhaustion_for("ray", n + 1))
    return (
        _fix_cases(model, n, cfg, rng)
        + _conjugation_cases(model, n, cfg, rng)
        + _commutation_cases(model, n, cfg, rng)
    )
