"""
suites/braids.py  –  Braid and lantern relations, and the braided
decomposition search for pairs of multitwists.
"""

import random
from itertools import combinations, product
from typing import List, Tuple

from topology.chains import alexander_chain
from topology.curves import intersection
from topology.models import BraidWitness, CaseResult, Chain, MappingClass, SuiteConfig
from topology.realize import surface_model
from topology.surface import exhaustion_for
from topology.twists import braided, braided_decomposition_search, braided_decomposition_verify, lantern_check, lantern_window
from suites.common import FAMILIES, guarded, sample
from suites.commutation import MAX_SUPPORT, multitwist, supports

LANTERN_STAGES = 4

Kronecker = Tuple[Tuple[str, ...], Tuple[Tuple[str, str], ...]]


def kronecker_configurations(chain: Chain, n: int) -> List[Kronecker]:
    """(common curves, once-meeting pairs) with every other pair of curves disjoint."""
    sub = chain.restrict(n)
    edges = [(a, b) for a, b, v in sub.intersections if v == 1]
    edges += [(b, a) for a, b in edges]
    out = []
    for k in range(1, MAX_SUPPORT + 1):
        for pairs in combinations(edges, k):
            used = [x for p in pairs for x in p]
            if len(set(used)) != len(used):
                continue
            if any(
                chain.value(pairs[i][s], pairs[j][t])
                for i in range(k) for j in range(k) if i != j for s in (0, 1) for t in (0, 1)
            ):
                continue
            for c in range(MAX_SUPPORT - k + 1):
                for common in combinations([x for x in sub.names if x not in used], c):
                    if any(chain.value(x, y) for x in common for y in used + list(common) if x != y):
                        continue
                    out.append((common, pairs))
    return out


def _braid_relation_cases(cfg, rng) -> List[CaseResult]:
    model = surface_model(exhaustion_for("binary", 4))
    n = 3
    out = []
    for a, b in sample(list(combinations(model.chain_names(n), 2)), cfg, rng):
        def check(a=a, b=b):
            i = intersection(a, b, model)
            result = braided(MappingClass.twist(a), MappingClass.twist(b), n, model)
            return result == (i == 1), f"i={i}, braided={result}"

        out.append(guarded(f"braid/{a}/{b}", check))
    return out


def _lantern_cases(cfg: SuiteConfig) -> List[CaseResult]:
    top = min(max(cfg.stages, 2), LANTERN_STAGES)
    out = []
    for family in FAMILIES:
        model = surface_model(exhaustion_for(family, top + 1))
        for c in range(1, top + 1):
            if model.exhaustion.pieces[c].parent == 0:
                continue

            def check(model=model, c=c):
                window = lantern_window(model, c)
                return lantern_check(window, model), f"window at {model.name(c, 'b0')}"

            out.append(guarded(f"lantern/{family}/{c}", check))
    return out


def _kronecker_pairs(common, kron, cfg, rng: random.Random):
    """Sampled runs draw one braided sign pattern; exhaustive runs take every pattern on both sides."""
    if cfg.budget:
        signs = [rng.choice((1, -1)) for _ in kron]
        return [(multitwist(common, rng), signs, signs)]
    return [
        (MappingClass.of(*zip(common, shared)), s1, s2)
        for shared in product((1, -1), repeat=len(common))
        for s1 in product((1, -1), repeat=len(kron))
        for s2 in product((1, -1), repeat=len(kron))
    ]


def _search_cases(cfg, rng: random.Random) -> List[CaseResult]:
    n = 3
    model = surface_model(exhaustion_for("ray", n + 1))
    chain = alexander_chain(model.exhaustion)

    pairs = []
    for common, kron in sample(kronecker_configurations(chain, n), cfg, rng):
        for shared, s1, s2 in _kronecker_pairs(common, kron, cfg, rng):
            t1 = shared * MappingClass.of(*[(a, s) for (a, _), s in zip(kron, s1)])
            t2 = shared * MappingClass.of(*[(b, s) for (_, b), s in zip(kron, s2)])
            pairs.append(("kronecker", t1, t2))
    all_supports = supports(chain, n)
    for A, B in sample(list(combinations(all_supports, 2)), cfg, rng):
        pairs.append(("random", multitwist(A, rng), multitwist(B, rng)))

    out = []
    for index, (kind, t1, t2) in enumerate(pairs):
        def check(t1=t1, t2=t2):
            expected = braided(t1, t2, n, model)
            found = braided_decomposition_search(t1, t2, n, model)
            if isinstance(found, BraidWitness):
                ok = braided_decomposition_verify(t1, t2, found, n, model)
                note = "verified witness" if ok else "witness rejected"
            else:
                ok, note = False, found.reason
            return ok == expected, f"braided={expected}: {note}"

        out.append(guarded(f"search/{kind}/{index:05d}", check))
    return out


def run(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    return _braid_relation_cases(cfg, rng) + _lantern_cases(cfg) + _search_cases(cfg, rng)
