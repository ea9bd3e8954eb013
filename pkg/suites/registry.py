"""
suites/registry.py  –  Named property batteries and the runner that turns a
SuiteConfig into a deterministic SuiteReport.
"""

import random
import time
from typing import Callable, Dict, List, Tuple

from langsmith import traceable
from loguru import logger

from topology.emit import emit_json
from topology.models import CaseResult, SuiteConfig, SuiteReport
from suites import braids, chain_audit, commutation, decomposition, finiteness, oracles, reconstruction

Battery = Callable[[SuiteConfig, random.Random], List[CaseResult]]

SUITES: Dict[str, Tuple[str, Battery]] = {
    "lemma-2.3": ("local finiteness, shuffle invariance and divergence certificates", finiteness.run),
    "lemma-2.4": ("conjugation, fixes ⇔ disjoint, commutes ⇔ disjoint", commutation.run),
    "thm-3.3": ("Alexander chain audit: tree-like, filling, non-separating", chain_audit.run),
    "thm-4.7": ("braid and lantern relations, braided decomposition search", braids.run),
    "prop-4.12": ("reconstruction pipeline, multiplicativity gate, lower genus", reconstruction.run),
    "lemma-6.2": ("twist-product decomposition of coherent families", decomposition.run),
    "oracles": ("window formulas against brute-force oracles", oracles.run),
}


@traceable(name="run_suite")
def run_suite(cfg: SuiteConfig) -> SuiteReport:
    if cfg.name not in SUITES:
        raise KeyError(f"unknown suite {cfg.name!r}; registered: {', '.join(SUITES)}")
    description, battery = SUITES[cfg.name]
    start = time.time()

    logger.info("=" * 60)
    logger.info(f"SUITE {cfg.name}  |  N={cfg.stages}  seed={cfg.seed}  budget={cfg.budget or 'exhaustive'}")
    logger.info(f"      {description}")
    logger.info("=" * 60)

    cases = sorted(battery(cfg, random.Random(cfg.seed)), key=lambda c: c.case_id)
    report = SuiteReport(name=cfg.name, stages=cfg.stages, seed=cfg.seed, cases=tuple(cases))
    _log_report(report, time.time() - start)

    if cfg.output:
        emit_json(report, cfg.output)
    return report


def _log_report(report: SuiteReport, duration: float):
    status = "✅ PASS" if report.passed else "❌ FAILED"
    logger.info("=" * 60)
    logger.info(f"SUITE {report.name} {status}")
    logger.info(f"Duration   : {duration:.1f}s")
    logger.info(f"Cases      : {len(report.cases)} ({len(report.failures)} failed)")
    for c in report.failures[:20]:
        logger.info(f"  ✗ {c.case_id} → {c.detail}")
    logger.info("=" * 60)
    if report.passed:
        logger.success(f"suite {report.name}: all {len(report.cases)} cases passed")
