import json

import pytest

from topology.chains import LazyChain, chain_graph
from topology.emit import chain_dot, emit_dot, emit_json, load_json
from topology.errors import EmitError
from topology.homo import RuleTable, identity_table, involution_table
from topology.models import Chain, Exhaustion, HomomorphismTable, MappingClass


def test_table_round_trip(binary, tmp_path):
    tab = involution_table(binary, 1)
    path = emit_json(tab, tmp_path / "tables" / "involution.json")
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert payload["table"]["v2.red"] == [["v3.red", 1]]
    assert load_json(HomomorphismTable, path) == tab


def test_chain_and_exhaustion_round_trip(ray, ray_chain, tmp_path):
    assert load_json(Chain, emit_json(ray_chain, tmp_path / "chain.json")) == ray_chain
    assert load_json(Exhaustion, emit_json(ray, tmp_path / "ex.json")) == ray


def test_unbounded_entities_are_refused(ray, tmp_path):
    with pytest.raises(EmitError):
        emit_json(LazyChain(family="ray"), tmp_path / "lazy.json")
    with pytest.raises(EmitError):
        emit_json(RuleTable(ray, ray, MappingClass.twist), tmp_path / "rule.json")
    with pytest.raises(EmitError):
        emit_dot(LazyChain(family="ray"), tmp_path / "lazy.dot")
    with pytest.raises(EmitError):
        emit_json({"not": "a model"}, tmp_path / "dict.json")


def test_dot_output(ray_chain, tmp_path):
    path = emit_dot(ray_chain, tmp_path / "chain.dot", 1)
    source = path.read_text(encoding="utf-8")
    assert source.lstrip().startswith("//") or source.lstrip().startswith("graph")
    assert '"v1.a"' in source
    assert "v2.red" not in source
    assert source.count(" -- ") == chain_graph(ray_chain, 1).number_of_edges()


def test_dot_colors(ray_chain):
    source = chain_dot(ray_chain, 0).source
    assert "fillcolor=blue" in source and "fillcolor=red" in source


def test_identity_table_json_keys(ray, tmp_path):
    payload = json.loads(emit_json(identity_table(ray), tmp_path / "id.json").read_text(encoding="utf-8"))
    assert set(payload) >= {"domain", "codomain", "horizon", "images", "table"}
