import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from topology.errors import UnsupportedError
from topology.models import Window
from topology.windows import (
    annulus_routing_oracle,
    coord_of,
    normalize,
    pants_twist,
    primitive,
    slope_of,
    slope_oracle,
    window_intersection,
    window_twist,
)

TORUS = Window(kind="torus", core="c", transversal="t", cuffs=("b",), stage=0)
SPHERE = Window(kind="four_holed", core="c", transversal="t", cuffs=("w", "x", "y", "z"), stage=1)

entries = st.integers(min_value=-5, max_value=5)


@st.composite
def slopes(draw):
    p, q = draw(entries), draw(entries)
    assume((p, q) != (0, 0) and primitive(p, q))
    return normalize(p, q)


@settings(max_examples=60, deadline=None)
@given(slopes(), slopes())
def test_torus_formula_matches_lattice_count(a, v):
    assert window_intersection(a, v, TORUS) == slope_oracle(*a, *v)


@settings(max_examples=100, deadline=None)
@given(slopes(), slopes(), st.integers(min_value=-3, max_value=3), st.sampled_from([TORUS, SPHERE]))
def test_twist_keeps_the_axis(a, v, k, window):
    image = window_twist(a, v, k, window)
    assert window_intersection(image, a, window) == window_intersection(a, v, window)


@settings(max_examples=100, deadline=None)
@given(slopes(), slopes(), st.integers(min_value=-3, max_value=3))
def test_sphere_twist_growth(a, v, k):
    image = window_twist(a, v, k, SPHERE)
    i = window_intersection(a, v, SPHERE)
    assert window_intersection(image, v, SPHERE) == abs(k) * i * i


@settings(max_examples=100, deadline=None)
@given(slopes(), slopes(), st.integers(min_value=-3, max_value=3))
def test_torus_twist_growth(a, v, k):
    image = window_twist(a, v, k, TORUS)
    assert window_intersection(image, v, TORUS) == abs(k) * window_intersection(a, v, TORUS) ** 2


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=0, max_value=10),
    st.integers(min_value=-15, max_value=15),
    st.integers(min_value=-5, max_value=5),
)
def test_pants_twist_matches_routing(m, t, k):
    assume(m > 0 or t >= 0)
    assert pants_twist(m, t, k) == annulus_routing_oracle(m, t, k)


@given(slopes(), st.sampled_from([TORUS, SPHERE]))
def test_coordinates_invert_slopes(s, window):
    assert slope_of(coord_of(s, window), window) == s


def test_odd_crossings_have_no_sphere_slope():
    with pytest.raises(UnsupportedError):
        slope_of((3, 1), SPHERE)


def test_known_values():
    assert window_intersection((1, 0), (0, 1), TORUS) == 1
    assert window_intersection((1, 0), (0, 1), SPHERE) == 2
    assert window_twist((1, 0), (0, 1), 1, TORUS) == (1, 1)
    assert slope_oracle(1, 0, 1, 2) == 2
