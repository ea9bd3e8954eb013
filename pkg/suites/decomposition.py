"""
suites/decomposition.py  –  Coherent families f⁽⁰⁾, f⁽¹⁾, … written back as
products of non-separating twists, checked against every stage marking.
"""

import random
from typing import Callable, Dict, List

from topology.errors import IncoherentFamilyError
from topology.models import CaseResult, Exhaustion, MappingClass, SuiteConfig
from topology.realize import SurfaceModel, surface_model
from topology.surface import exhaustion_for
from topology.twists import equal_mc, twist_product_decomposition
from suites.common import FAMILIES, case, guarded

DECOMPOSITION_STAGE = 4

Family = Callable[[Exhaustion, int], List[MappingClass]]


def _t(ex: Exhaustion, position: int, role: str, k: int = 1) -> MappingClass:
    return MappingClass.twist(f"{ex.vertex_name(position)}.{role}", k)


def _cumulative(step: Callable[[Exhaustion, int], MappingClass]) -> Family:
    def build(ex: Exhaustion, N: int) -> List[MappingClass]:
        out, f = [], MappingClass.identity()
        for n in range(N + 1):
            f = f * step(ex, n)
            out.append(f)
        return out

    return build


def _last_blue(ex: Exhaustion, n: int) -> str:
    return f"blue{ex.pieces[n].blues}"


COHERENT: Dict[str, Family] = {
    "constant-root-red": lambda ex, N: [_t(ex, 0, "red")] * (N + 1),
    "blue-per-stage": _cumulative(lambda ex, n: _t(ex, n, "blue1")),
    "alternating-reds": _cumulative(lambda ex, n: _t(ex, n, "red", (-1) ** n)),
    "blue-then-red": _cumulative(lambda ex, n: _t(ex, n, "blue1") * _t(ex, n, "red")),
    "mixed-powers": _cumulative(
        lambda ex, n: _t(ex, n, _last_blue(ex, n), 2) * _t(ex, n, "red", -1) * _t(ex, n, "blue1")
    ),
}


def incoherent(ex: Exhaustion, N: int) -> List[MappingClass]:
    return [MappingClass.identity()] + [_t(ex, 0, "red")] * N


def reproduces(family: List[MappingClass], N: int, model: SurfaceModel):
    """Decompose every prefix and compare the emitted product with f⁽ⁿ⁾ on the marking."""
    for n in range(N + 1):
        emitted = twist_product_decomposition(family[: n + 1], n, model)
        product = MappingClass.of(*emitted)
        if not equal_mc(product, family[n], max(n, 2), model):
            return False, f"stage {n}: product of {len(emitted)} twists differs from f({n})"
    return True, f"{len(twist_product_decomposition(family, N, model))} twists through stage {N}"


def run(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    N = max(2, min(cfg.stages, DECOMPOSITION_STAGE))
    cases = []
    for family_name in FAMILIES:
        ex = exhaustion_for(family_name, N + 1)
        model = surface_model(ex)
        for name, build in COHERENT.items():
            cases.append(guarded(
                f"{family_name}/{name}", lambda build=build: reproduces(build(ex, N), N, model)
            ))
        try:
            twist_product_decomposition(incoherent(ex, N), N, model)
            cases.append(case(f"{family_name}/incoherent", False, "no IncoherentFamilyError"))
        except IncoherentFamilyError as exc:
            cases.append(case(f"{family_name}/incoherent", exc.stage == 1, str(exc)))
    return cases
