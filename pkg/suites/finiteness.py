"""
suites/finiteness.py  –  Local finiteness of twist streams: locally finite
streams evaluate independently of enumeration order, accumulating streams
produce divergence certificates, and the twist inequality holds on samples.
"""

import random
from itertools import count, permutations
from typing import List

from topology.chains import alexander_chain
from topology.curves import (
    CurveStream,
    chain_streams,
    curve_stage,
    intersection,
    is_locally_finite,
    same_curve,
)
from topology.models import CaseResult, Curve, Letter, MappingClass, SuiteConfig, ViolationCertificate
from topology.realize import SurfaceModel, surface_model
from topology.surface import exhaustion_for
from topology.twists import apply, divergence_certificate, infinite_product
from suites.common import FAMILIES, guarded, sample

DIVERGENT_BUDGET = 8


# ── Divergent streams ─────────────────────────────────────────────────────

def torus_stream(model: SurfaceModel, step: int, power: int) -> CurveStream:
    core = model.name(0, "blue1")

    def letters():
        for i in count(1):
            yield Letter(curve=Curve.coord({core: (step * i, -1)}), power=power)

    return CurveStream(letters, name=f"torus step={step} k={power}")


def four_holed_stream(model: SurfaceModel, c: int, power: int) -> CurveStream:
    core = model.name(c, "b0")

    def letters():
        for i in count(1):
            yield Letter(curve=Curve.coord({core: (2 * i, -1)}), power=power)

    return CurveStream(letters, name=f"four-holed {core} k={power}")


def carried_stream(model: SurfaceModel, c: int) -> CurveStream:
    """t_red^m(blue1) for m = 1, 2, … inside one piece."""
    red = MappingClass.twist(model.name(c, "red"))

    def letters():
        curve = Curve.named(model.name(c, "blue1"))
        for _ in count(1):
            curve = apply(red, curve, model)
            yield Letter(curve=curve, power=1)

    return CurveStream(letters, name=f"carried {model.name(c, 'red')}")


def divergent_streams(N: int):
    """(model, stream, probe) triples that never leave Σ_N."""
    out = []
    binary = surface_model(exhaustion_for("binary", N + 1))
    for step in range(1, 6):
        for power in (1, -1):
            out.append((binary, torus_stream(binary, step, power), binary.name(0, "red")))
    for c in range(2, N + 1):
        for power in (1, -1):
            out.append((binary, four_holed_stream(binary, c, power), binary.name(c, "a")))
    ray = surface_model(exhaustion_for("ray", N + 1))
    for c in range(1, N + 1):
        out.append((ray, carried_stream(ray, c), ray.name(c, "blue2")))
    return out


def _diverges(model: SurfaceModel, stream: CurveStream, probe: str, N: int):
    verdict = is_locally_finite(stream, probe, N, model, budget=DIVERGENT_BUDGET)
    if not isinstance(verdict, ViolationCertificate):
        return False, f"no certificate: {verdict.verdict}"
    cert = divergence_certificate(stream, verdict, model, budget=DIVERGENT_BUDGET)
    bad = [w.index for w in cert.witnesses if not (w.value >= w.bound > 0)]
    if not cert.witnesses or bad:
        return False, f"twist inequality fails at witnesses {bad}"
    return True, f"probe {verdict.probe.label}, {len(cert.witnesses)} witnesses, min value {min(w.value for w in cert.witnesses)}"


# ── Locally finite streams ────────────────────────────────────────────────

def _evaluates(model: SurfaceModel, stream: CurveStream, N: int, rng: random.Random):
    verdict = is_locally_finite(stream, None, N, model)
    if isinstance(verdict, ViolationCertificate) or not verdict.left_stage:
        return False, f"expected to leave Σ{N}: {verdict.verdict}"
    letters = list(stream)
    inner = [l for l in letters if curve_stage(l.curve, model) <= N]
    outer = letters[len(inner):]
    target = rng.choice(model.inner_marking(N))
    result = infinite_product(stream, target, N, model)
    chain = alexander_chain(model.exhaustion)
    names = [l.curve.name for l in inner]
    if any(chain.value(a, b) for i, a in enumerate(names) for b in names[i + 1:]):
        return isinstance(result, Curve), f"ordered product on {target.label} ({len(inner)} letters)"
    shuffled = CurveStream.of(rng.sample(inner, len(inner)) + outer, name=f"{stream.name} shuffled")
    again = infinite_product(shuffled, target, N, model)
    return same_curve(result, again, model), f"shuffle-invariant on {target.label} ({len(inner)} letters)"


# ── Twist inequality ──────────────────────────────────────────────────────

def _inequality_cases(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    model = surface_model(exhaustion_for("ray", 3))
    curves = model.inner_marking(2)
    triples = sample(list(permutations(curves, 3)), cfg, rng)
    out = []
    for index, (a, c, b) in enumerate(triples):
        k = rng.choice((-2, -1, 1, 2))

        def check(a=a, c=c, b=b, k=k):
            lhs = intersection(apply(MappingClass.twist(a, k), c, model), b, model)
            bound = abs(k) * intersection(a, c, model) * intersection(a, b, model) - intersection(c, b, model)
            return lhs >= bound, f"i={lhs} ≥ {bound} (k={k})"

        out.append(guarded(f"inequality/{index:04d}", check))
    return out


def run(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    N = max(cfg.stages, 2)
    cases: List[CaseResult] = []
    for family in FAMILIES:
        model = surface_model(exhaustion_for(family, N + 1))
        for index, stream in enumerate(chain_streams(model.exhaustion)):
            cases.append(guarded(
                f"finite/{family}/{index:02d}", lambda m=model, s=stream: _evaluates(m, s, N, rng)
            ))
    for index, (model, stream, probe) in enumerate(divergent_streams(N)):
        cases.append(guarded(
            f"divergent/{index:02d}", lambda m=model, s=stream, p=probe: _diverges(m, s, p, N)
        ))
    cases.extend(_inequality_cases(cfg, rng))
    return cases
