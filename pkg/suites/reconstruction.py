"""
suites/reconstruction.py  –  Homomorphism tables through the reconstruction
pipeline, lower genus of the chains, the multiplicativity gate and the
reducibility search.
"""

import random
from typing import List

import networkx as nx

from topology.chains import (
    alexander_chain,
    chain_graph,
    forest_matching,
    lower_genus,
    matching_brute_force,
    piece_names,
    realize_involution,
)
from topology.curves import chain_streams
from topology.errors import BlueprintError
from topology.homo import (
    accumulating_table,
    check_infinitely_multiplicative,
    collapsing_table,
    compose_tables,
    constant_table,
    detect_reducible,
    identity_table,
    involution_table,
    omitting_table,
    run_pipeline,
    soundness_audit,
    trivial_table,
    twist_killing_table,
)
from topology.models import CaseResult, Exhaustion, HomomorphismTable, SuiteConfig
from topology.surface import blueprint_involution, exhaustion_for, stage_genus
from suites.common import FAMILIES, case, guarded, sample

PIPELINE_STAGE = 4
GENUS_STAGES = 6
BRUTE_FORCE_CURVES = 12


def involution_pivots(ex: Exhaustion) -> List[int]:
    """Blueprint vertices whose subtree swap carries template curves to template curves."""
    out = []
    for v in ex.blueprint.vertices:
        try:
            realize_involution(ex, blueprint_involution(ex.blueprint, v.index))
        except BlueprintError:
            continue
        out.append(v.index)
    return out


def expected_pieces(tab: HomomorphismTable, N: int) -> dict:
    return {tab.domain.vertex_name(i): tab.codomain.vertex_name(i) for i in range(N + 1)}


# ── Pipeline ──────────────────────────────────────────────────────────────

def _passes(tab: HomomorphismTable, N: int):
    report = run_pipeline(tab, N)
    if not report.passed:
        return False, f"failed at {report.failed_gate}"
    recovered = piece_names(report.homeomorphism)
    if recovered != expected_pieces(tab, N):
        return False, f"recovered {recovered}"
    unsound = soundness_audit(tab, report.homeomorphism, N)
    return not unsound, f"pieces {recovered}" + (f"; unsound on {unsound}" if unsound else "")


def _fails_at(tab: HomomorphismTable, N: int, gate: str, marker: str = ""):
    report = run_pipeline(tab, N)
    verdict = next((v for v in report.verdicts if not v.passed), None)
    if verdict is None:
        return False, "unexpected pass"
    ok = verdict.gate == gate and marker in verdict.detail and verdict.witness is not None
    return ok, f"{verdict.gate}: {verdict.detail} [{verdict.witness}]"


def _pipeline_cases(cfg: SuiteConfig) -> List[CaseResult]:
    N = max(3, min(cfg.stages, PIPELINE_STAGE))
    out = []
    for family in FAMILIES:
        ex = exhaustion_for(family, N)
        out.append(guarded(f"pipeline/{family}/identity", lambda ex=ex: _passes(identity_table(ex), N)))
        for pivot in involution_pivots(ex):
            tab = involution_table(ex, pivot)
            out.append(guarded(f"pipeline/{family}/involution-{pivot}", lambda tab=tab: _passes(tab, N)))
            back = involution_table(tab.codomain, pivot)
            out.append(guarded(
                f"pipeline/{family}/involution-{pivot}-twice",
                lambda tab=tab, back=back: _passes(compose_tables(tab, back), N),
            ))
        out.append(guarded(f"pipeline/{family}/twist-killing",
                           lambda ex=ex: _fails_at(twist_killing_table(ex), N, "twist_to_twist", "support size 0")))
        out.append(guarded(f"pipeline/{family}/collapsing",
                           lambda ex=ex: _fails_at(collapsing_table(ex), N, "twist_to_twist", "cyclic-image obstruction")))
        out.append(guarded(f"pipeline/{family}/accumulating",
                           lambda ex=ex: _fails_at(accumulating_table(ex), N, "multiplicativity")))
    return out


# ── Multiplicativity gate ─────────────────────────────────────────────────

def _multiplicativity_cases(cfg: SuiteConfig) -> List[CaseResult]:
    N = max(3, min(cfg.stages, PIPELINE_STAGE))
    out = []
    for family in FAMILIES:
        ex = exhaustion_for(family, N)
        streams = chain_streams(ex)
        tables = [identity_table(ex)] + [involution_table(ex, p) for p in involution_pivots(ex)]
        tables.append(constant_table(ex, f"{ex.vertex_name(1)}.blue1"))
        for tab in tables:
            def check(tab=tab):
                verdicts = [check_infinitely_multiplicative(tab, streams, M) for M in range(N)]
                return all(v.passed for v in verdicts), f"{tab.description}: {len(streams)} streams, stages 0..{N - 1}"

            out.append(guarded(f"multiplicative/{family}/{tab.description}", check))

        def accumulating(ex=ex):
            verdict = check_infinitely_multiplicative(accumulating_table(ex), streams, N - 1)
            ok = not verdict.passed and verdict.certificate is not None and verdict.certificate.witnesses
            return bool(ok), f"{verdict.detail} [{verdict.witness}]"

        out.append(guarded(f"multiplicative/{family}/accumulating", accumulating))
    return out


# ── Reducibility ──────────────────────────────────────────────────────────

def _reducible_cases(cfg: SuiteConfig) -> List[CaseResult]:
    N = max(3, min(cfg.stages, PIPELINE_STAGE))
    n = N - 1
    ex = exhaustion_for("binary", N)
    out = [
        guarded("reducible/identity", lambda: (detect_reducible(identity_table(ex), n) is None, "no fixed curve")),
    ]

    def trivial():
        found = detect_reducible(trivial_table(ex), n)
        return found is not None and found.name == f"{ex.vertex_name(0)}.blue1", f"found {found}"

    out.append(guarded("reducible/trivial", trivial))
    for position in range(1, n + 1):
        def omitted(position=position):
            found = detect_reducible(omitting_table(ex, position), n)
            prefix = f"{ex.vertex_name(position)}."
            return found is not None and found.name.startswith(prefix), f"found {found.label if found else None}"

        out.append(guarded(f"reducible/omit-{position}", omitted))
    return out


# ── Lower genus ───────────────────────────────────────────────────────────

def _genus_cases(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    top = min(max(cfg.stages, 1), GENUS_STAGES)
    out = []
    for family in FAMILIES:
        ex = exhaustion_for(family, top)
        chain = alexander_chain(ex)
        for n in range(top + 1):
            def genus(n=n):
                g = lower_genus(chain, n)
                return g == n + 1 == stage_genus(ex, n), f"lower genus {g}, stage genus {stage_genus(ex, n)}"

            out.append(guarded(f"genus/{family}/stage-{n}", genus))

        graph = chain_graph(chain)
        subsets = [
            tuple(sorted(rng.sample(list(graph.nodes), k)))
            for k in range(2, min(BRUTE_FORCE_CURVES, graph.number_of_nodes()) + 1)
            for _ in range(8)
        ]
        subsets += [tuple(chain.restrict(n).names) for n in range(top + 1)
                    if len(chain.restrict(n).names) <= BRUTE_FORCE_CURVES]
        for index, nodes in enumerate(sample(subsets, cfg, rng)):
            sub = nx.Graph(graph.subgraph(nodes))
            dp, brute = forest_matching(sub), matching_brute_force(sub)
            out.append(case(f"matching/{family}/{index:04d}", dp == brute, f"{len(nodes)} curves: dp={dp}, brute={brute}"))
    return out


def run(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    return (
        _pipeline_cases(cfg)
        + _multiplicativity_cases(cfg)
        + _reducible_cases(cfg)
        + _genus_cases(cfg, rng)
    )
