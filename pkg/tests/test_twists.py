import pytest

from topology.curves import CurveStream, intersection, same_curve
from topology.errors import IncoherentFamilyError, StageError
from topology.models import BraidWitness, Curve, DivergenceCertificate, Letter, MappingClass, NotFound
from topology.twists import (
    apply,
    braided,
    braided_decomposition_search,
    braided_decomposition_verify,
    commutes,
    equal_mc,
    infinite_product,
    lantern_check,
    lantern_window,
    multitwist,
    twist_product_decomposition,
)

t = MappingClass.twist


# ── Words ─────────────────────────────────────────────────────────────────

def test_words_cancel_adjacent_letters():
    assert (t("v0.red") * t("v0.red", -1)).is_identity
    assert (t("v0.red") ** 3).word == (Letter(curve=Curve.named("v0.red"), power=3),)
    assert (t("v0.red") * t("v1.red")).inverse() == t("v1.red", -1) * t("v0.red", -1)


def test_word_json_round_trip():
    f = t("v0.red", 2) * t(Curve.coord({"v0.blue1": (1, 3)}), -1)
    assert MappingClass.from_word_json(f.to_word_json()) == f


# ── Action ────────────────────────────────────────────────────────────────

def test_disjoint_twist_fixes(ray_model):
    assert same_curve(apply(t("v1.blue1"), "v0.red", ray_model), "v0.red", ray_model)


def test_twist_about_a_crossing_curve(ray_model):
    image = apply(t("v0.blue1"), "v0.red", ray_model)
    assert not same_curve(image, "v0.red", ray_model)
    assert intersection(image, "v0.red", ray_model) == 1
    assert intersection(image, "v0.blue1", ray_model) == 1


def test_twist_squared_moves_by_square(ray_model):
    image = apply(t("v1.red", 2), "v1.blue1", ray_model)
    assert intersection(image, "v1.blue1", ray_model) == 2


def test_multitwist_rejects_meeting_curves(ray_model):
    with pytest.raises(ValueError):
        multitwist([("v0.red", 1), ("v0.blue1", 1)], ray_model)
    assert multitwist([("v0.blue1", 1), ("v1.blue1", -2)], ray_model).word[1].power == -2


# ── Equality and relations ────────────────────────────────────────────────

def test_equal_mc(ray_model):
    assert equal_mc(t("v0.red") * t("v0.red", -1), MappingClass.identity(), 2, ray_model)
    assert not equal_mc(t("v0.red"), MappingClass.identity(), 2, ray_model)


def test_equal_mc_stage_contract(ray_model):
    with pytest.raises(StageError):
        equal_mc(t("v0.red"), t("v0.red"), 1, ray_model)
    with pytest.raises(StageError):
        equal_mc(t("v0.red"), t("v0.red"), 3, ray_model)
    with pytest.raises(StageError):
        equal_mc(t("v3.red"), t("v3.red"), 2, ray_model)


def test_commutes_iff_disjoint(ray_model):
    assert commutes(t("v0.blue1"), t("v1.blue1"), 2, ray_model)
    assert not commutes(t("v0.blue1"), t("v0.red"), 2, ray_model)


def test_braid_relation(ray_model):
    assert braided(t("v0.blue1"), t("v0.red"), 2, ray_model)
    assert braided(t("v1.red"), t("v1.a"), 2, ray_model)
    assert not braided(t("v0.blue1"), t("v1.blue1"), 2, ray_model)


def test_braided_search_finds_a_verified_witness(ray_model):
    t1, t2 = t("v0.blue1"), t("v0.red")
    witness = braided_decomposition_search(t1, t2, 2, ray_model)
    assert isinstance(witness, BraidWitness)
    assert braided_decomposition_verify(t1, t2, witness, 2, ray_model)


def test_braided_search_with_a_common_part(ray_model):
    common = t("v2.blue1")
    witness = braided_decomposition_search(common * t("v0.blue1"), common * t("v0.red"), 2, ray_model)
    assert isinstance(witness, BraidWitness)
    assert witness.common == common


def test_braided_search_reports_disjoint_pairs(ray_model):
    assert isinstance(braided_decomposition_search(t("v0.blue1"), t("v1.blue1"), 2, ray_model), NotFound)


def test_verify_rejects_bad_signs(ray_model):
    bad = BraidWitness(common=MappingClass.identity(),
                       pairs=((Curve.named("v0.blue1"), Curve.named("v0.red")),), signs=(2,))
    assert not braided_decomposition_verify(t("v0.blue1"), t("v0.red"), bad, 2, ray_model)


# ── Lantern ───────────────────────────────────────────────────────────────

def test_lantern_relation_holds(ray_model):
    window = lantern_window(ray_model, 2)
    assert window.stage == 2
    assert lantern_check(window, ray_model)


# ── Infinite products ─────────────────────────────────────────────────────

def test_locally_finite_product_evaluates(ray, ray_model):
    from topology.curves import stage_stream

    image = infinite_product(stage_stream(ray, "blue1"), "v0.blue1", 2, ray_model)
    assert same_curve(image, "v0.blue1", ray_model)


def test_accumulating_product_diverges(ray_model):
    stream = CurveStream.of([Letter(curve=Curve.named("v0.red"), power=1)] * 4, name="reds")
    certificate = infinite_product(stream, "v0.blue1", 1, ray_model)
    assert isinstance(certificate, DivergenceCertificate)
    assert certificate.witnesses
    assert all(w.value >= w.bound > 0 for w in certificate.witnesses)


# ── Stage-wise decomposition ──────────────────────────────────────────────

def test_coherent_family_decomposes(ray_model):
    family = [t("v0.red"), t("v0.red") * t("v1.blue1"), t("v0.red") * t("v1.blue1") * t("v2.blue1")]
    emitted = twist_product_decomposition(family, 2, ray_model)
    assert [l.curve.name for l in emitted] == ["v0.red", "v1.blue1", "v2.blue1"]
    assert all(l.power in (1, -1) for l in emitted)


def test_powers_unfold_into_single_twists(ray_model):
    emitted = twist_product_decomposition([t("v0.red", -2)] * 3, 2, ray_model)
    assert [l.power for l in emitted] == [-1, -1]


def test_incoherent_family_is_rejected(ray_model):
    with pytest.raises(IncoherentFamilyError) as info:
        twist_product_decomposition([MappingClass.identity(), t("v0.red"), t("v0.red")], 2, ray_model)
    assert info.value.stage == 1


def test_short_family_is_rejected(ray_model):
    with pytest.raises(ValueError):
        twist_product_decomposition([t("v0.red")], 2, ray_model)
