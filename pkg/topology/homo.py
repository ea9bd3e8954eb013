"""
topology/homo.py  –  Homomorphisms given on twist generators, their gates, and
the ReconstructionPipeline that recovers the inducing homeomorphism.

A table sends each chain twist t_a of the domain to an explicit multitwist of
the codomain. The pipeline runs its gates in order and stops at the first one
that fails:

  multiplicativity → disjointness → twist-to-twist → chain isomorphism
  → lower genus → induced homeomorphism → φ₀ check
"""

import time
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from langsmith import traceable
from loguru import logger

from config.settings import settings
from topology.chains import (
    alexander_chain,
    chain_isomorphism,
    induced_homeomorphism,
    inverse_map,
    lower_genus,
    piece_names,
    realize_involution,
    transport,
)
from topology.curves import (
    CurveStream,
    chain_streams,
    intersection,
    is_locally_finite,
    is_separating,
    on_spine,
    resolve,
    same_curve,
)
from topology.errors import StageError, UnsupportedError
from topology.models import (
    Chain,
    ChainBijection,
    ChainCurve,
    Curve,
    Exhaustion,
    Failure,
    GateVerdict,
    HomomorphismTable,
    Letter,
    MappingClass,
    NotIsomorphic,
    PipelineReport,
    StageMap,
    ViolationCertificate,
)
from topology.realize import surface_model
from topology.surface import blueprint_involution, chain_curve_names
from topology.twists import apply, divergence_certificate, equal_mc

HYPOTHESES = (
    "φ is assumed surjective; an epimorphism cannot be certified from finitely many generator images",
    "the φ₀ check covers the stage-(N−1) marking; curves beyond it are not compared",
)

Table = Union[HomomorphismTable, "RuleTable"]


# ── Tables ────────────────────────────────────────────────────────────────

def _horizon(ex: Exhaustion, N: Optional[int]) -> int:
    N = ex.stages if N is None else N
    if not 0 <= N <= ex.stages:
        raise StageError(f"table horizon {N} outside built stages 0..{ex.stages}", stage=N)
    return N


def _table(ex: Exhaustion, codomain: Exhaustion, N: int, rule: Callable[[str, int], MappingClass],
           description: str) -> HomomorphismTable:
    images = tuple((name, rule(name, stage)) for name, _, stage in chain_curve_names(ex, N))
    return HomomorphismTable(domain=ex, codomain=codomain, horizon=N, images=images, description=description)


def identity_table(ex: Exhaustion, N: Optional[int] = None) -> HomomorphismTable:
    N = _horizon(ex, N)
    return _table(ex, ex, N, lambda a, _: MappingClass.twist(a), "identity")


def involution_table(ex: Exhaustion, pivot: int, N: Optional[int] = None) -> HomomorphismTable:
    """t_a ↦ t_h(a) for the homeomorphism h realizing the swap of the subtrees below `pivot`."""
    N = _horizon(ex, N)
    h = realize_involution(ex, blueprint_involution(ex.blueprint, pivot))
    return _table(
        ex, h.codomain, N,
        lambda a, _: MappingClass.twist(transport(h, a)),
        f"involution at v{pivot}",
    )


def twist_killing_table(ex: Exhaustion, N: Optional[int] = None, victim: Optional[str] = None) -> HomomorphismTable:
    N = _horizon(ex, N)
    victim = victim or f"{ex.vertex_name(min(1, N))}.red"
    return _table(
        ex, ex, N,
        lambda a, _: MappingClass.identity() if a == victim else MappingClass.twist(a),
        f"kills t_{victim}",
    )


def collapsing_table(ex: Exhaustion, N: Optional[int] = None) -> HomomorphismTable:
    """The braided pair blue1, red of the root piece share the image t_blue1."""
    N = _horizon(ex, N)
    blue, red = f"{ex.vertex_name(0)}.blue1", f"{ex.vertex_name(0)}.red"
    return _table(
        ex, ex, N,
        lambda a, _: MappingClass.twist(blue if a == red else a),
        f"collapses t_{red} onto t_{blue}",
    )


def multitwist_table(
    ex: Exhaustion, generator: str, curves: Sequence[str], N: Optional[int] = None
) -> HomomorphismTable:
    N = _horizon(ex, N)
    image = MappingClass.of(*[(c, 1) for c in curves])
    return _table(
        ex, ex, N,
        lambda a, _: image if a == generator else MappingClass.twist(a),
        f"t_{generator} ↦ " + " ".join(f"t_{c}" for c in curves),
    )


def substitution_table(ex: Exhaustion, substitutions: Dict[str, str], N: Optional[int] = None) -> HomomorphismTable:
    """Identity except t_a ↦ t_b for each listed pair."""
    N = _horizon(ex, N)
    return _table(
        ex, ex, N,
        lambda a, _: MappingClass.twist(substitutions.get(a, a)),
        ", ".join(f"t_{a} ↦ t_{b}" for a, b in substitutions.items()),
    )


def window_family(ex: Exhaustion, s: int) -> Curve:
    """t_red^s(blue1) in the root torus window."""
    return Curve.coord({f"{ex.vertex_name(0)}.blue1": (s, -1)})


def accumulating_table(ex: Exhaustion, N: Optional[int] = None) -> HomomorphismTable:
    """Stage-s generators ↦ the twist about t_red^s(blue1); every image meets the root blue curve."""
    N = _horizon(ex, N)
    return _table(
        ex, ex, N,
        lambda a, stage: MappingClass.twist(window_family(ex, stage)) if stage else MappingClass.twist(a),
        "accumulates in the root window",
    )


def constant_table(ex: Exhaustion, target: str, N: Optional[int] = None) -> HomomorphismTable:
    N = _horizon(ex, N)
    return _table(ex, ex, N, lambda a, _: MappingClass.twist(target), f"every t_a ↦ t_{target}")


def omitting_table(ex: Exhaustion, position: int, N: Optional[int] = None) -> HomomorphismTable:
    """Generators on the piece at `position` go to the identity."""
    N = _horizon(ex, N)
    prefix = f"{ex.vertex_name(position)}."
    return _table(
        ex, ex, N,
        lambda a, _: MappingClass.identity() if a.startswith(prefix) else MappingClass.twist(a),
        f"omits piece {ex.vertex_name(position)}",
    )


def trivial_table(ex: Exhaustion, N: Optional[int] = None) -> HomomorphismTable:
    N = _horizon(ex, N)
    return _table(ex, ex, N, lambda a, _: MappingClass.identity(), "trivial")


def compose_tables(first: HomomorphismTable, second: HomomorphismTable) -> HomomorphismTable:
    """second ∘ first. Images of `first` must be words in twists about generators of `second`."""
    if first.codomain != second.domain:
        raise ValueError("codomain of the first table is not the domain of the second")
    images = []
    for g, word in first.images:
        letters = []
        for letter in word.word:
            if letter.curve.kind != "named":
                raise UnsupportedError(f"{letter.curve.label} is not a generator name", letter=letter.curve.label)
            letters.extend((second.image(letter.curve.name) ** letter.power).word)
        images.append((g, MappingClass.of(*letters)))
    return HomomorphismTable(
        domain=first.domain,
        codomain=second.codomain,
        horizon=min(first.horizon, second.horizon),
        images=tuple(images),
        description=f"({second.description}) ∘ ({first.description})",
    )


class RuleTable:
    """Generator images produced on demand by `rule`; materialized per stage bound."""

    def __init__(self, domain: Exhaustion, codomain: Exhaustion, rule: Callable[[str], MappingClass],
                 description: str = "stream rule"):
        self.domain = domain
        self.codomain = codomain
        self.rule = rule
        self.description = description

    def materialize(self, N: int) -> HomomorphismTable:
        N = _horizon(self.domain, N)
        return _table(self.domain, self.codomain, N, lambda a, _: self.rule(a), self.description)


# ── φ★ and gates ──────────────────────────────────────────────────────────

def phi_star(tab: HomomorphismTable, a: str) -> Tuple[Curve, ...]:
    """Support of the image multitwist of t_a."""
    return tuple(tab.image(a).curves())


def image_stream(tab: HomomorphismTable, stream: CurveStream) -> CurveStream:
    """Support union of the images, in stream order; ends where the table does."""

    def letters():
        seen = set()
        for letter in stream:
            if letter.curve.kind != "named":
                return
            try:
                word = tab.image(letter.curve.name)
            except KeyError:
                return
            for c in word.curves():
                if c.key not in seen:
                    seen.add(c.key)
                    yield Letter(curve=c, power=1)

    return CurveStream(letters, name=f"φ({stream.name})")


def check_infinitely_multiplicative(
    tab: HomomorphismTable, streams: Sequence[CurveStream], N: int
) -> GateVerdict:
    """Streams are read inside Σ_N; the table must reach past N so that good images can leave."""
    if tab.horizon < N + 1:
        raise StageError(f"multiplicativity at stage {N} needs a table horizon >= {N + 1}", stage=N)
    dom, cod = surface_model(tab.domain), surface_model(tab.codomain)
    for index, stream in enumerate(streams):
        if isinstance(is_locally_finite(stream, None, N, dom), ViolationCertificate):
            raise ValueError(f"test stream {stream.name} is not locally finite in the domain")
        image = image_stream(tab, stream)
        verdict = is_locally_finite(image, None, N, cod)
        if isinstance(verdict, ViolationCertificate):
            return GateVerdict(
                gate="multiplicativity",
                passed=False,
                detail=f"stream {index} ({stream.name}): image support is not locally finite",
                witness=f"probe {verdict.probe.label} met at indices {list(verdict.hits)}",
                certificate=divergence_certificate(image, verdict, cod),
            )
    return GateVerdict(gate="multiplicativity", passed=True, detail=f"{len(streams)} streams")


def check_disjointness_transport(tab: HomomorphismTable, n: int) -> GateVerdict:
    dom, cod = surface_model(tab.domain), surface_model(tab.codomain)
    chain = alexander_chain(tab.domain).restrict(n)
    names = [a for a in chain.names if not is_separating(a, dom)]
    pairs = 0
    for a, b in combinations(names, 2):
        if chain.value(a, b):
            continue
        pairs += 1
        for x in phi_star(tab, a):
            for y in phi_star(tab, b):
                if intersection(x, y, cod):
                    return GateVerdict(
                        gate="disjointness",
                        passed=False,
                        detail=f"images of disjoint {a} and {b} meet",
                        witness=f"({a}, {b}): {x.label} meets {y.label}",
                    )
    return GateVerdict(gate="disjointness", passed=True, detail=f"{pairs} disjoint pairs at stage {n}")


def check_twist_to_twist(tab: HomomorphismTable, n: int) -> GateVerdict:
    cod = surface_model(tab.codomain)
    chain = alexander_chain(tab.domain).restrict(n)
    for a in chain.names:
        word = tab.image(a)
        support = word.curves()
        if len(support) != 1:
            return GateVerdict(gate="twist_to_twist", passed=False,
                               detail=f"support size {len(support)}", witness=a)
        if len(word.word) != 1 or word.word[0].power != 1:
            return GateVerdict(gate="twist_to_twist", passed=False,
                               detail=f"exponent {sum(l.power for l in word.word)}", witness=a)
        if is_separating(support[0], cod):
            return GateVerdict(gate="twist_to_twist", passed=False,
                               detail=f"image curve {support[0].label} separates", witness=a)
    for a, b, v in chain.intersections:
        if v == 1 and same_curve(phi_star(tab, a)[0], phi_star(tab, b)[0], cod):
            return GateVerdict(
                gate="twist_to_twist",
                passed=False,
                detail="cyclic-image obstruction: braided generators share an image",
                witness=f"{a}, {b} ↦ {phi_star(tab, a)[0].label}",
            )
    return GateVerdict(gate="twist_to_twist", passed=True, detail=f"{len(chain.names)} generators")


def _image_chain(tab: HomomorphismTable, n: int) -> Union[Tuple[Dict[str, str], Chain], Failure]:
    """a ↦ φ★(a) read as a map onto the codomain chain, with its intersection data."""
    cod = surface_model(tab.codomain)
    cod_chain = alexander_chain(tab.codomain)
    by_path = {cod.path(c.name): c for c in cod_chain.curves}
    colors = {c.name: c.color for c in cod_chain.curves}
    domain = alexander_chain(tab.domain).restrict(n)

    psi: Dict[str, str] = {}
    owner: Dict[str, str] = {}
    for c in domain.curves:
        support = phi_star(tab, c.name)
        if len(support) != 1:
            return Failure(stage=c.stage, reason=f"φ★ has {len(support)} components", witness=c.name)
        x = support[0]
        target = by_path.get(resolve(x, cod)) if on_spine(x) else None
        if target is None:
            return Failure(stage=c.stage, reason="image is not a codomain chain curve", witness=f"{c.name} ↦ {x.label}")
        if target.name in owner:
            return Failure(stage=c.stage, reason="not injective", witness=f"{owner[target.name]}, {c.name} ↦ {target.name}")
        owner[target.name] = c.name
        psi[c.name] = target.name

    missing = sorted(set(cod_chain.restrict(n).names) - set(owner))
    if missing:
        return Failure(stage=n, reason="image misses codomain chain curves", witness=", ".join(missing[:3]))
    for a, b in combinations(domain.names, 2):
        if domain.value(a, b) != cod_chain.value(psi[a], psi[b]):
            return Failure(stage=n, reason="intersection pattern not preserved", witness=f"{a}, {b}")

    image = Chain(
        curves=tuple(ChainCurve(name=psi[c.name], color=colors[psi[c.name]], stage=c.stage) for c in domain.curves),
        intersections=tuple((psi[a], psi[b], v) for a, b, v in domain.intersections),
        exhaustion=tab.codomain,
        horizon=n,
    )
    return psi, image


def check_chain_isomorphism(tab: HomomorphismTable, n: int) -> Union[ChainBijection, Failure]:
    result = _image_chain(tab, n)
    if isinstance(result, Failure):
        return result
    psi, image = result
    bijection = chain_isomorphism(alexander_chain(tab.domain), image, n, hint=psi)
    if isinstance(bijection, NotIsomorphic):
        return Failure(stage=n, reason=bijection.invariant)
    return bijection


def check_lower_genus(tab: HomomorphismTable, n: int) -> GateVerdict:
    """Σₖ and Σ′ₖ carry the same genus, read off the chains, for each k ≤ n."""
    result = _image_chain(tab, n)
    if isinstance(result, Failure):
        return GateVerdict(gate="lower_genus", passed=False, detail=result.reason, witness=result.witness)
    _, image = result
    domain = alexander_chain(tab.domain)
    for k in range(n + 1):
        mine, theirs = lower_genus(domain, k), lower_genus(image, k)
        genus = tab.codomain.genus[k]
        if not mine == theirs == genus:
            return GateVerdict(
                gate="lower_genus",
                passed=False,
                detail=f"stage {k}: lower genus {mine} vs image {theirs}, codomain genus {genus}",
                witness=f"Σ{k}",
            )
    return GateVerdict(gate="lower_genus", passed=True, detail=f"stages 0..{n}")


def check_phi0(tab: HomomorphismTable, h: StageMap, N: int) -> GateVerdict:
    """φ(g)(h(c)) = h(g(c)) for each generator g and stage-(N−1) marking curve c."""
    dom, cod = surface_model(tab.domain), surface_model(tab.codomain)
    marking = dom.marking(N - 1)
    generators = [a for a in tab.generators if dom.stage_of_name(a) <= N]
    for g in generators:
        for c in marking:
            left = apply(tab.image(g), transport(h, c), cod)
            right = transport(h, apply(MappingClass.twist(g), c, dom))
            if not same_curve(left, right, cod):
                return GateVerdict(gate="phi0", passed=False,
                                   detail="φ(g)∘h and h∘g differ", witness=f"g=t_{g}, c={c.label}")
    return GateVerdict(gate="phi0", passed=True, detail=f"{len(generators)} generators × {len(marking)} curves")


def soundness_audit(tab: HomomorphismTable, h: StageMap, N: int) -> List[str]:
    """Generators g with h⁻¹ φ(g) h ≠ g on stage N−1."""
    dom = surface_model(tab.domain)
    back = inverse_map(h)
    bad = []
    for g in tab.generators:
        if dom.stage_of_name(g) > N - 1:
            continue
        pulled = MappingClass.of(*[(transport(back, l.curve), l.power) for l in tab.image(g).word])
        if not equal_mc(pulled, MappingClass.twist(g), N - 1, dom):
            bad.append(g)
    return bad


def detect_reducible(tab: HomomorphismTable, n: int) -> Optional[Curve]:
    """First non-peripheral codomain marking curve fixed by every generator image."""
    cod = surface_model(tab.codomain)
    if tab.horizon < n + 1:
        raise StageError(f"reducibility search at stage {n} needs a table horizon >= {n + 1}", stage=n)
    peripheral = {cod.path(label) for label in tab.codomain.boundaries[tab.horizon]}
    images = [tab.image(g) for g in tab.generators]
    for m in cod.marking(n):
        if cod.path(m.name) in peripheral:
            continue
        if all(same_curve(apply(f, m, cod), m, cod) for f in images):
            logger.info(f"{tab.description}: {m.label} is fixed by every generator image")
            return m
    return None


# ── Pipeline ──────────────────────────────────────────────────────────────

class ReconstructionPipeline:
    def __init__(self, streams: Optional[Callable[[Exhaustion], List[CurveStream]]] = None):
        self.streams = streams or chain_streams

    @traceable(name="run_pipeline")
    def run(self, table: Table, N: int) -> PipelineReport:
        start = time.time()
        lazy = isinstance(table, RuleTable)
        tab = table.materialize(N) if lazy else table
        if N < 3:
            raise StageError(f"the pipeline needs N >= 3, got {N}", stage=N)
        if tab.horizon < N:
            raise StageError(f"table is total only to stage {tab.horizon}, need {N}", stage=N)

        logger.info("=" * 60)
        logger.info(f"PIPELINE  |  {tab.description}  |  N={N}")
        logger.info("=" * 60)

        verdicts: List[GateVerdict] = []
        homeomorphism: Optional[StageMap] = None

        def done() -> PipelineReport:
            report = PipelineReport(
                stage=N,
                verdicts=tuple(verdicts),
                passed=bool(verdicts) and all(v.passed for v in verdicts) and homeomorphism is not None,
                homeomorphism=homeomorphism,
                hypotheses=HYPOTHESES,
                duration_seconds=time.time() - start,
            )
            self._log_report(report, tab)
            return report

        gates = [
            ("multiplicativity", "[1/7] Checking infinite multiplicativity on test streams...",
             lambda: check_infinitely_multiplicative(tab, self.streams(tab.domain), N - 1)),
            ("disjointness", "[2/7] Transporting disjointness...",
             lambda: check_disjointness_transport(tab, N)),
            ("twist_to_twist", "[3/7] Checking that twists go to twists...",
             lambda: check_twist_to_twist(tab, N)),
            ("chain_isomorphism", "[4/7] Reading φ★ as a chain isomorphism...",
             lambda: self._as_verdict("chain_isomorphism", check_chain_isomorphism(tab, N))),
            ("lower_genus", "[5/7] Comparing lower genus stage by stage...",
             lambda: check_lower_genus(tab, N)),
        ]
        for name, message, gate in gates:
            logger.info(message)
            verdict = self._dispatch(name, gate)
            verdicts.append(verdict)
            if not verdict.passed:
                return done()
            if name == "multiplicativity" and lazy and not settings.ADMIT_LAZY_TABLES:
                verdicts.append(GateVerdict(
                    gate="admission",
                    passed=False,
                    detail="stream-rule tables stop after the multiplicativity gate (ADMIT_LAZY_TABLES is off)",
                ))
                return done()

        logger.info("[6/7] Building the induced homeomorphism...")
        bijection = check_chain_isomorphism(tab, N)
        result = self._dispatch(
            "homeomorphism", lambda: induced_homeomorphism(bijection, tab.domain, tab.codomain, N)
        )
        if isinstance(result, StageMap):
            homeomorphism = result
            verdicts.append(GateVerdict(gate="homeomorphism", passed=True, detail=str(piece_names(result))))
        else:
            verdicts.append(self._as_verdict("homeomorphism", result))
            return done()

        logger.info("[7/7] Comparing φ with conjugation by h on the marking...")
        verdict = self._dispatch("phi0", lambda: check_phi0(tab, homeomorphism, N))
        verdicts.append(verdict)
        if not verdict.passed:
            homeomorphism = None
        return done()

    def _dispatch(self, gate: str, fn):
        try:
            return fn()
        except UnsupportedError as exc:
            logger.warning(f"{gate}: outside the exact domain: {exc}")
            return GateVerdict(gate=gate, passed=False, detail=f"unsupported: {exc}",
                               witness=" / ".join(exc.pair) if exc.pair else exc.letter)

    @staticmethod
    def _as_verdict(gate: str, result) -> GateVerdict:
        if isinstance(result, GateVerdict):
            return result
        if isinstance(result, Failure):
            where = f"stage {result.stage}: " if result.stage is not None else ""
            return GateVerdict(gate=gate, passed=False, detail=where + result.reason, witness=result.witness)
        return GateVerdict(gate=gate, passed=True, detail=f"{len(result.pairs)} curves matched")

    def _log_report(self, report: PipelineReport, tab: HomomorphismTable):
        status = "✅ PASS" if report.passed else "❌ FAILED"
        logger.info("=" * 60)
        logger.info(f"PIPELINE {status}  |  {tab.description}")
        logger.info(f"Duration   : {report.duration_seconds:.1f}s")
        for v in report.verdicts:
            icon = "✓" if v.passed else "✗"
            suffix = f"  [{v.witness}]" if v.witness else ""
            logger.info(f"  {icon} {v.gate} → {v.detail}{suffix}")
        if report.homeomorphism is not None:
            logger.info(f"Pieces     : {piece_names(report.homeomorphism)}")
        logger.info("=" * 60)
        if report.passed:
            logger.success(f"{tab.description}: induced by a homeomorphism through stage {report.stage}")


def run_pipeline(table: Table, N: int) -> PipelineReport:
    return ReconstructionPipeline().run(table, N)
