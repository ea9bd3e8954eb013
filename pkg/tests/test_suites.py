import random

import pytest

from suites.braids import kronecker_configurations
from suites.common import sample
from suites.decomposition import COHERENT
from suites.oracles import slopes
from suites.registry import SUITES, run_suite
from topology.chains import alexander_chain
from topology.emit import load_json
from topology.models import SuiteConfig, SuiteReport
from topology.surface import exhaustion_for


def _count(report: SuiteReport, prefix: str) -> int:
    return sum(1 for c in report.cases if c.case_id.startswith(prefix))


def test_registry_names():
    assert list(SUITES) == ["lemma-2.3", "lemma-2.4", "thm-3.3", "thm-4.7", "prop-4.12", "lemma-6.2", "oracles"]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite(SuiteConfig(name="lemma-9.9", stages=2))


def test_sample_keeps_order():
    cfg = SuiteConfig(name="oracles", stages=1, budget=5)
    picked = sample(range(100), cfg, random.Random(1))
    assert len(picked) == 5 and picked == sorted(picked)
    assert sample(range(100), cfg.model_copy(update={"budget": 0}), random.Random(1)) == list(range(100))


def test_slopes_are_primitive_and_normalized():
    out = slopes(2)
    assert (1, 0) in out and (0, 1) in out and (-1, 2) in out
    assert (0, -1) not in out and (2, 2) not in out


def test_oracles_are_deterministic(tmp_path):
    cfg = SuiteConfig(name="oracles", stages=1, seed=3, budget=40, output=str(tmp_path / "oracles.json"))
    first, second = run_suite(cfg), run_suite(cfg)
    assert first.passed
    assert first.cases == second.cases
    assert _count(first, "routing/") == 200
    assert load_json(SuiteReport, tmp_path / "oracles.json") == second


@pytest.mark.parametrize("name", ["lemma-2.4", "thm-3.3", "thm-4.7", "lemma-6.2"])
def test_small_suites_pass(name):
    report = run_suite(SuiteConfig(name=name, stages=2, budget=20))
    assert report.cases
    assert report.passed, [c.detail for c in report.failures]


def test_coherent_catalog():
    assert len(COHERENT) == 5


# ── Acceptance sizes ──────────────────────────────────────────────────────

@pytest.mark.slow
def test_finiteness_at_stage_six():
    report = run_suite(SuiteConfig(name="lemma-2.3", stages=6, budget=50))
    assert report.passed, [c.detail for c in report.failures]
    assert _count(report, "finite/") >= 20
    assert _count(report, "divergent/") >= 20


@pytest.mark.slow
def test_commutation_at_stage_three():
    report = run_suite(SuiteConfig(name="lemma-2.4", stages=3))
    assert report.passed, [c.detail for c in report.failures]
    assert _count(report, "conjugation/") >= 100
    assert _count(report, "fixes/") >= 100


@pytest.mark.slow
def test_chain_audit_to_stage_six():
    report = run_suite(SuiteConfig(name="thm-3.3", stages=6))
    assert report.passed, [c.detail for c in report.failures]
    assert _count(report, "binary/stage-") == 7


@pytest.mark.slow
def test_braids_and_lanterns_to_stage_four():
    report = run_suite(SuiteConfig(name="thm-4.7", stages=4, budget=100))
    assert report.passed, [c.detail for c in report.failures]
    assert _count(report, "lantern/") >= 6


@pytest.mark.slow
def test_braided_search_takes_every_sign_pattern():
    report = run_suite(SuiteConfig(name="thm-4.7", stages=3, budget=0))
    assert report.passed, [c.detail for c in report.failures]
    chain = alexander_chain(exhaustion_for("ray", 4))
    patterns = sum(2 ** (len(common) + 2 * len(kron)) for common, kron in kronecker_configurations(chain, 3))
    assert _count(report, "search/kronecker/") == patterns


@pytest.mark.slow
def test_reconstruction_at_stage_four():
    report = run_suite(SuiteConfig(name="prop-4.12", stages=4, budget=100))
    assert report.passed, [c.detail for c in report.failures]
    assert _count(report, "pipeline/binary/involution-") >= 2
    assert _count(report, "multiplicative/") >= 9


@pytest.mark.slow
def test_decomposition_at_stage_four():
    report = run_suite(SuiteConfig(name="lemma-6.2", stages=4))
    assert report.passed, [c.detail for c in report.failures]
    assert _count(report, "ray/") == len(COHERENT) + 1


@pytest.mark.slow
def test_exhaustive_slopes():
    report = run_suite(SuiteConfig(name="oracles", stages=1, budget=0))
    assert report.passed, [c.detail for c in report.failures]
    assert _count(report, "slope/") == len(slopes()) * (len(slopes()) - 1) // 2
