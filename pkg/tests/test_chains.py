import networkx as nx
from hypothesis import given, settings
from hypothesis import strategies as st

from topology.chains import (
    LazyChain,
    alexander_chain,
    chain_graph,
    chain_isomorphism,
    forest_matching,
    induced_homeomorphism,
    inductive_step_audit,
    is_filling,
    is_tree_like,
    lower_genus,
    matching_brute_force,
    non_separating_audit,
    piece_names,
    transport,
)
from topology.models import Chain, ChainBijection, Curve, Failure, NotIsomorphic, StageMap
from topology.realize import surface_model
from topology.surface import build_blueprint, build_exhaustion, exhaustion_for, stage_genus


# ── Construction ──────────────────────────────────────────────────────────

def test_chain_sizes(ray_chain):
    assert [len(ray_chain.restrict(n).curves) for n in range(4)] == [2, 6, 10, 14]


def test_binary_stage_one(binary):
    chain = alexander_chain(binary)
    assert len(chain.restrict(1).curves) == 7


def test_lazy_chain_materializes_per_stage():
    lazy = LazyChain(family="ray")
    chain = lazy.materialize(2)
    assert chain.horizon == 2
    assert chain == alexander_chain(build_exhaustion(build_blueprint("ray", 2), 2))


# ── Audit ─────────────────────────────────────────────────────────────────

def test_chain_audit(family):
    ex = exhaustion_for(family, 3)
    chain = alexander_chain(ex)
    for n in range(4):
        assert is_tree_like(chain, n).tree_like
        assert is_filling(chain, n).filling
        assert not non_separating_audit(chain, n)
        assert {v for _, _, v in chain.restrict(n).intersections} <= {1}


def test_missing_a_curve_leaves_an_annulus(ray_chain):
    full = ray_chain.restrict(1)
    holed = Chain(
        curves=tuple(c for c in full.curves if c.name != "v1.a"),
        intersections=tuple(t for t in full.intersections if "v1.a" not in t[:2]),
        exhaustion=full.exhaustion,
        horizon=1,
    )
    filling = is_filling(holed, 1)
    assert not filling.filling
    assert filling.regions == ("v1.b0: annulus around the gluing circle",)
    assert not is_tree_like(holed, 1).tree_like


def test_window_pattern(ray_model):
    results = inductive_step_audit(ray_model, 3)
    assert [r.case_id for r in results] == ["window-2", "window-3"]
    assert all(r.passed for r in results)


# ── Lower genus ───────────────────────────────────────────────────────────

def test_lower_genus_matches_stage_genus(family):
    ex = exhaustion_for(family, 4)
    chain = alexander_chain(ex)
    for n in range(5):
        assert lower_genus(chain, n) == n + 1 == stage_genus(ex, n)


def test_small_matchings():
    assert forest_matching(nx.path_graph(5)) == 2
    assert forest_matching(nx.star_graph(3)) == 1
    assert matching_brute_force(nx.cycle_graph(6)) == 2


@settings(max_examples=80, deadline=None)
@given(st.integers(min_value=3, max_value=12).flatmap(
    lambda n: st.lists(st.integers(min_value=0, max_value=n - 1), min_size=n - 2, max_size=n - 2)
))
def test_tree_dp_equals_brute_force(prufer):
    tree = nx.from_prufer_sequence(prufer)
    assert forest_matching(tree) == matching_brute_force(tree)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=11))
def test_forest_dp_equals_brute_force(edges):
    graph = nx.Graph()
    graph.add_nodes_from(range(12))
    for u, v in edges:
        if u != v and not nx.has_path(graph, u, v):
            graph.add_edge(u, v)
    assert forest_matching(graph) == matching_brute_force(graph)


# ── Isomorphism and homeomorphism ─────────────────────────────────────────

def test_chain_is_isomorphic_to_itself(ray_chain):
    bijection = chain_isomorphism(ray_chain, ray_chain, 2)
    assert isinstance(bijection, ChainBijection)
    assert all(a == b for a, b in bijection.pairs)


def test_different_families_are_told_apart(ray_chain, binary):
    verdict = chain_isomorphism(ray_chain, alexander_chain(binary), 1)
    assert isinstance(verdict, NotIsomorphic)
    assert "vertex count" in verdict.invariant


def test_tree_search_without_a_hint(ray_chain):
    graph = chain_graph(ray_chain, 2)
    bijection = chain_isomorphism(ray_chain, ray_chain, 2, hint={})
    assert isinstance(bijection, ChainBijection)
    assert len(bijection.pairs) == graph.number_of_nodes()


def test_identity_bijection_induces_identity(ray):
    psi = {name: name for name in surface_model(ray).chain_names(2)}
    h = induced_homeomorphism(psi, ray, ray, 2)
    assert isinstance(h, StageMap)
    assert h.as_dict() == {0: 0, 1: 1, 2: 2}
    assert piece_names(h) == {"v0": "v0", "v1": "v1", "v2": "v2"}
    assert transport(h, "v1.a") == Curve.named("v1.a")


def _mirrored(names, positions):
    swap = {"blue1": "blue2", "blue2": "blue1"}
    psi = {}
    for name in names:
        vertex, role = name.split(".")
        if int(vertex[1:]) in positions:
            role = swap.get(role, role)
        psi[name] = f"{vertex}.{role}"
    return psi


def test_reflection_of_the_ray_is_recovered(ray):
    names = surface_model(ray).chain_names(2)
    h = induced_homeomorphism(_mirrored(names, {1, 2}), ray, ray, 2)
    assert isinstance(h, StageMap)
    assert h.flip
    assert transport(h, "v1.blue1") == Curve.named("v1.blue2")
    assert transport(h, "v2.a") == Curve.named("v2.a")


def test_reflecting_one_piece_is_not_induced(ray):
    names = surface_model(ray).chain_names(2)
    failure = induced_homeomorphism(_mirrored(names, {2}), ray, ray, 2)
    assert isinstance(failure, Failure)
    assert failure.reason == "ψ is not induced by the ribbon map"


def test_role_swapping_bijection_fails(ray):
    psi = {name: name for name in surface_model(ray).chain_names(2)}
    psi["v1.red"], psi["v1.blue1"] = "v1.blue1", "v1.red"
    failure = induced_homeomorphism(psi, ray, ray, 2)
    assert isinstance(failure, Failure)
    assert failure.witness in ("v1.red", "v1.blue1")


def test_partial_bijection_fails(ray):
    psi = {name: name for name in surface_model(ray).chain_names(1)}
    failure = induced_homeomorphism(psi, ray, ray, 2)
    assert isinstance(failure, Failure)
    assert failure.reason == "ψ is not defined on the whole chain"


def test_homeomorphism_beyond_built_stages(ray):
    psi = {name: name for name in surface_model(ray).chain_names(3)}
    failure = induced_homeomorphism(psi, ray, ray, 4)
    assert isinstance(failure, Failure) and failure.stage == 4
