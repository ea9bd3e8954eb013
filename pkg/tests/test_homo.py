import pytest

from config.settings import settings
from topology.curves import CurveStream, chain_streams
from topology.chains import piece_names
from topology.errors import BlueprintError, StageError
from topology.homo import (
    RuleTable,
    accumulating_table,
    check_disjointness_transport,
    check_infinitely_multiplicative,
    check_twist_to_twist,
    collapsing_table,
    compose_tables,
    constant_table,
    detect_reducible,
    identity_table,
    involution_table,
    multitwist_table,
    omitting_table,
    phi_star,
    run_pipeline,
    soundness_audit,
    trivial_table,
    twist_killing_table,
)
from topology.models import Curve, Letter, MappingClass
from topology.realize import surface_model
from topology.surface import exhaustion_for


@pytest.fixture(scope="module")
def identity_report(ray):
    return run_pipeline(identity_table(ray), 3)


# ── Tables ────────────────────────────────────────────────────────────────

def test_identity_table_covers_the_chain(ray):
    tab = identity_table(ray)
    assert tab.horizon == 3
    assert len(tab.generators) == 14
    assert phi_star(tab, "v1.a") == (Curve.named("v1.a"),)


def test_involution_table_renames_swapped_pieces(binary):
    tab = involution_table(binary, 1)
    assert tab.image("v2.red") == MappingClass.twist("v3.red")
    assert tab.image("v0.red") == MappingClass.twist("v0.red")
    assert tab.codomain.vertex_name(2) == "v3"


def test_involution_table_mirrors_the_blues(binary):
    tab = involution_table(binary, 1)
    assert tab.image("v2.blue1") == MappingClass.twist("v3.blue2")
    assert tab.image("v2.blue3") == MappingClass.twist("v3.blue3")
    assert tab.image("v1.blue2") == MappingClass.twist("v1.blue1")
    assert tab.image("v1.a") == MappingClass.twist("v1.a")


def test_involution_images_leave_their_own_paths(binary):
    tab = involution_table(binary, 1)
    dom, cod = surface_model(binary), surface_model(tab.codomain)
    moved = [g for g, word in tab.images if cod.path(word.word[0].curve.name) != dom.path(g)]
    assert "v2.blue1" in moved


def test_pivot_with_a_fixed_sibling_has_no_table():
    with pytest.raises(BlueprintError):
        involution_table(exhaustion_for("binary", 4), 2)


def test_involution_twice_is_the_identity(binary):
    tab = involution_table(binary, 1)
    back = compose_tables(tab, involution_table(tab.codomain, 1))
    assert back.codomain == binary
    assert all(word == MappingClass.twist(g) for g, word in back.images)


def test_compose_checks_the_middle_surface(ray, binary):
    with pytest.raises(ValueError):
        compose_tables(identity_table(ray), identity_table(binary))


def test_horizon_outside_built_stages(ray):
    with pytest.raises(StageError):
        identity_table(ray, 5)


# ── Pipeline ──────────────────────────────────────────────────────────────

def test_identity_passes(identity_report):
    assert identity_report.passed
    assert identity_report.failed_gate is None
    assert identity_report.homeomorphism.as_dict() == {0: 0, 1: 1, 2: 2, 3: 3}
    assert [v.gate for v in identity_report.verdicts] == [
        "multiplicativity", "disjointness", "twist_to_twist", "chain_isomorphism",
        "lower_genus", "homeomorphism", "phi0",
    ]
    assert len(identity_report.hypotheses) == 2


def test_identity_is_sound(ray, identity_report):
    assert soundness_audit(identity_table(ray), identity_report.homeomorphism, 3) == []


def test_involution_passes(binary):
    tab = involution_table(binary, 1)
    report = run_pipeline(tab, 3)
    assert report.passed
    assert report.homeomorphism.as_dict() == {0: 0, 1: 1, 2: 3, 3: 2}
    assert report.homeomorphism.flip
    assert soundness_audit(tab, report.homeomorphism, 3) == []


def test_pipeline_below_the_built_stages():
    report = run_pipeline(identity_table(exhaustion_for("ray", 4)), 3)
    assert report.passed
    assert report.homeomorphism.as_dict() == {0: 0, 1: 1, 2: 2, 3: 3}


def test_involution_below_the_built_stages():
    tab = involution_table(exhaustion_for("binary", 4), 1)
    report = run_pipeline(tab, 3)
    assert report.passed
    assert piece_names(report.homeomorphism) == {"v0": "v0", "v1": "v1", "v2": "v3", "v3": "v2"}
    assert soundness_audit(tab, report.homeomorphism, 3) == []


def test_two_rays_involution_swaps_the_rays(two_rays):
    report = run_pipeline(involution_table(two_rays, 1), 3)
    assert report.passed
    assert report.homeomorphism.as_dict() == {0: 0, 1: 1, 2: 3, 3: 2}


def test_twist_killing_fails_at_twist_to_twist(ray):
    report = run_pipeline(twist_killing_table(ray), 3)
    assert not report.passed
    verdict = report.verdicts[-1]
    assert verdict.gate == "twist_to_twist"
    assert verdict.detail == "support size 0"
    assert verdict.witness == "v1.red"
    assert report.homeomorphism is None


def test_collapsing_fails_on_the_braided_pair(ray):
    report = run_pipeline(collapsing_table(ray), 3)
    assert report.failed_gate == "twist_to_twist"
    assert "cyclic-image obstruction" in report.verdicts[-1].detail


def test_accumulating_fails_multiplicativity(ray):
    report = run_pipeline(accumulating_table(ray), 3)
    assert report.failed_gate == "multiplicativity"
    assert len(report.verdicts) == 1
    assert report.verdicts[0].certificate is not None


def test_extra_support_breaks_disjointness(ray):
    tab = multitwist_table(ray, "v0.red", ["v0.red", "v2.blue1"])
    assert check_twist_to_twist(tab, 3).detail == "support size 2"
    report = run_pipeline(tab, 3)
    assert report.failed_gate == "disjointness"


def test_stage_contract(ray):
    with pytest.raises(StageError):
        run_pipeline(identity_table(ray), 2)
    with pytest.raises(StageError):
        run_pipeline(identity_table(ray, 2), 3)


def test_rule_tables_stop_after_admission(ray):
    rule = RuleTable(ray, ray, MappingClass.twist, "identity rule")
    report = run_pipeline(rule, 3)
    assert [v.gate for v in report.verdicts] == ["multiplicativity", "admission"]
    assert report.failed_gate == "admission"


def test_rule_tables_admitted_when_enabled(ray, monkeypatch):
    monkeypatch.setattr(settings, "ADMIT_LAZY_TABLES", True)
    report = run_pipeline(RuleTable(ray, ray, MappingClass.twist, "identity rule"), 3)
    assert report.passed


# ── Gates ─────────────────────────────────────────────────────────────────

def test_disjointness_counts_pairs(ray):
    verdict = check_disjointness_transport(identity_table(ray), 1)
    assert verdict.passed
    assert verdict.detail.endswith("at stage 1")


def test_multiplicativity_monotone_in_stage(binary):
    tab = identity_table(binary)
    streams = chain_streams(binary)
    assert all(check_infinitely_multiplicative(tab, streams, M).passed for M in range(3))


def test_constant_table_stays_locally_finite(ray):
    tab = constant_table(ray, "v1.blue1")
    assert check_infinitely_multiplicative(tab, chain_streams(ray), 2).passed


def test_multiplicativity_needs_room_to_leave(ray):
    with pytest.raises(StageError):
        check_infinitely_multiplicative(identity_table(ray), chain_streams(ray), 3)


def test_multiplicativity_rejects_divergent_domain_streams(ray):
    reds = CurveStream.of([Letter(curve=Curve.named("v0.red"), power=1)] * 5)
    with pytest.raises(ValueError):
        check_infinitely_multiplicative(identity_table(ray), [reds], 1)


def test_accumulating_certificate(ray):
    verdict = check_infinitely_multiplicative(accumulating_table(ray), chain_streams(ray), 2)
    assert not verdict.passed
    assert verdict.certificate.witnesses
    assert all(w.value >= w.bound for w in verdict.certificate.witnesses)


# ── Reducibility ──────────────────────────────────────────────────────────

def test_identity_fixes_no_curve(binary):
    assert detect_reducible(identity_table(binary), 2) is None


def test_trivial_fixes_everything(binary):
    assert detect_reducible(trivial_table(binary), 2) == Curve.named("v0.blue1")


def test_omitted_piece_is_fixed(binary):
    found = detect_reducible(omitting_table(binary, 2), 2)
    assert found is not None and found.name.startswith("v2.")


def test_reducibility_needs_a_larger_horizon(binary):
    with pytest.raises(StageError):
        detect_reducible(identity_table(binary), 3)
