"""
suites/common.py  –  Shared plumbing for the property batteries: case
construction, budgeted sampling and exception capture.
"""

import random
from typing import Callable, List, Sequence, Tuple, TypeVar

from loguru import logger

from topology.errors import TopologyError
from topology.models import CaseResult, SuiteConfig

T = TypeVar("T")

FAMILIES = ("ray", "binary", "2-rays")


def sample(items: Sequence[T], cfg: SuiteConfig, rng: random.Random) -> List[T]:
    """All items when the budget allows (or is 0), else a seeded sample in original order."""
    items = list(items)
    if not cfg.budget or len(items) <= cfg.budget:
        return items
    keep = sorted(rng.sample(range(len(items)), cfg.budget))
    return [items[i] for i in keep]


def case(case_id: str, passed: bool, detail: str = "") -> CaseResult:
    if not passed:
        logger.warning(f"✗ {case_id}: {detail}")
    return CaseResult(case_id=case_id, passed=bool(passed), detail=detail)


def guarded(case_id: str, check: Callable[[], Tuple[bool, str]]) -> CaseResult:
    """Run one check; engine errors become failed cases carrying the exception text."""
    try:
        passed, detail = check()
    except TopologyError as exc:
        return case(case_id, False, f"{type(exc).__name__}: {exc}")
    return case(case_id, passed, detail)
