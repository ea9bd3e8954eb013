import pytest

from topology.curves import (
    CurveStream,
    chain_streams,
    consume,
    curve_stage,
    intersection,
    is_locally_finite,
    is_multicurve,
    is_separating,
    same_curve,
    stage_stream,
)
from topology.errors import UnresolvedCurveError, UnsupportedError
from topology.models import Curve, Letter, LocallyFiniteUpTo, ViolationCertificate


def _letters(*names, power=1):
    return [Letter(curve=Curve.named(n), power=power) for n in names]


# ── Intersection and separation ───────────────────────────────────────────

def test_star_curves_meet_once(ray_model):
    assert intersection("v0.blue1", "v0.red", ray_model) == 1
    assert intersection("v1.red", "v1.blue2", ray_model) == 1


def test_curves_on_different_pieces_are_disjoint(ray_model):
    assert intersection("v0.blue1", "v1.blue1", ray_model) == 0
    assert intersection("v0.blue1", "v2.red", ray_model) == 0
    assert is_multicurve(["v0.blue1", "v1.blue1", "v1.blue2", "v2.blue1"], ray_model)


def test_intersection_is_symmetric(ray_model):
    names = ray_model.chain_names(2)
    for a in names:
        for b in names:
            assert intersection(a, b, ray_model) == intersection(b, a, ray_model)


def test_chain_curves_do_not_separate(ray_model):
    assert not any(is_separating(a, ray_model) for a in ray_model.chain_names(2))


def test_gluing_circle_separates_the_ray(ray_model):
    assert is_separating("v1.b0", ray_model)


def test_glued_labels_name_the_same_curve(ray_model):
    assert same_curve("v0.b0", "v1.b0", ray_model)
    assert not same_curve("v0.blue1", "v0.red", ray_model)


def test_curve_stage(ray_model):
    assert curve_stage("v0.red", ray_model) == 0
    assert curve_stage("v2.a", ray_model) == 2
    with pytest.raises(UnresolvedCurveError):
        curve_stage("v7.red", ray_model)


def test_pants_coordinates_read_crossings(ray_model):
    c = Curve.coord({"v0.blue1": (3, -1)})
    assert intersection(c, "v0.blue1", ray_model) == 3
    assert intersection(c, "v2.blue1", ray_model) == 0


def test_coordinates_outside_one_window_are_unsupported(ray_model):
    spread = Curve.coord({"v0.blue1": (1, 0), "v1.blue1": (1, 0)})
    with pytest.raises(UnsupportedError):
        intersection(spread, "v1.red", ray_model)


# ── Streams ───────────────────────────────────────────────────────────────

def test_stream_is_restartable():
    stream = CurveStream.of(_letters("v0.red", "v0.blue1"))
    assert stream.take(1) == stream.take(1)
    assert len(list(stream)) == 2


def test_stage_stream_leaves_every_stage(ray, ray_model):
    stream = stage_stream(ray, "red")
    taken, left = consume(stream, 1, ray_model)
    assert [l.curve.name for l in taken] == ["v0.red", "v1.red"]
    assert left


def test_chain_streams_are_distinct(ray):
    streams = chain_streams(ray)
    assert len(streams) == 10
    assert len({s.name for s in streams}) == 10


def test_chain_streams_are_locally_finite(binary, binary_model):
    for stream in chain_streams(binary):
        verdict = is_locally_finite(stream, None, 2, binary_model)
        assert isinstance(verdict, LocallyFiniteUpTo)
        assert verdict.left_stage


def test_repeated_letters_meet_a_probe(ray_model):
    stream = CurveStream.of(_letters("v0.blue1", "v0.blue1", "v0.blue1"))
    verdict = is_locally_finite(stream, "v0.red", 1, ray_model)
    assert isinstance(verdict, ViolationCertificate)
    assert verdict.hits == (0, 1, 2)
    assert verdict.probe.name == "v0.red"


def test_finite_multicurve_stream_has_no_violation(ray_model):
    stream = CurveStream.of(_letters("v0.blue1", "v1.blue1", "v2.blue1"))
    verdict = is_locally_finite(stream, None, 2, ray_model)
    assert verdict == LocallyFiniteUpTo(stage=2, consumed=3, left_stage=False)


def test_budget_caps_consumption(ray_model):
    endless = CurveStream(lambda: iter(_letters("v0.blue1") * 1000))
    taken, left = consume(endless, 0, ray_model, budget=5)
    assert len(taken) == 5 and not left
