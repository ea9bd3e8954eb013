"""
suites/oracles.py  –  Window formulas against brute force: lattice-line
crossings on the torus and strand routing through an annulus.
"""

import random
from itertools import combinations
from typing import List

from topology.models import CaseResult, SuiteConfig, Window
from topology.windows import annulus_routing_oracle, normalize, pants_twist, primitive, slope_oracle, window_intersection, window_twist
from suites.common import case, sample

SLOPE_BOUND = 8
ROUTING_CASES = 200
TWIST_CHECK_BOUND = 24

_TORUS = Window(kind="torus", core="core", transversal="transversal", cuffs=("cuff",), stage=0)


def slopes(bound: int = SLOPE_BOUND):
    """Primitive slopes (p, q) with |p|, q ≤ bound, normalized to q > 0 or (1, 0)."""
    out = {normalize(p, q) for p in range(-bound, bound + 1) for q in range(0, bound + 1)
           if (p, q) != (0, 0) and primitive(p, q)}
    return sorted(out)


def _slope_cases(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    out = []
    for a, v in sample(list(combinations(slopes(), 2)), cfg, rng):
        formula = window_intersection(a, v, _TORUS)
        brute = slope_oracle(*a, *v)
        k = rng.choice((-2, -1, 1, 2))
        image = window_twist(a, v, k, _TORUS)
        ok = formula == brute
        moved = kept = None
        if max(map(abs, image)) <= TWIST_CHECK_BOUND:
            # t_a^k keeps i(·, a) and moves v by |k| i(a, v)^2
            moved = slope_oracle(*image, *v)
            kept = slope_oracle(*image, *a)
            ok = ok and moved == abs(k) * brute ** 2 and kept == brute
        out.append(case(
            f"slope/{a[0]},{a[1]}/{v[0]},{v[1]}", ok,
            f"formula={formula} brute={brute} k={k} i(t(v),v)={moved} i(t(v),a)={kept}",
        ))
    return out


def _routing_cases(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    out = []
    for index in range(max(ROUTING_CASES, cfg.budget)):
        m, t, k = rng.randint(0, 12), rng.randint(-20, 20), rng.randint(-6, 6)
        if m == 0 and t < 0:
            t = -t
        expected = annulus_routing_oracle(m, t, k)
        got = pants_twist(m, t, k)
        out.append(case(f"routing/{index:04d}", got == expected, f"(m,t,k)=({m},{t},{k}): {got} vs {expected}"))
    return out


def run(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    return _slope_cases(cfg, rng) + _routing_cases(cfg, rng)
