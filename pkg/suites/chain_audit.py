"""
suites/chain_audit.py  –  The Alexander chain at every stage: tree-like,
filling, non-separating, pairwise intersections at most one, plus the
four-holed window pattern used by the inductive step.
"""

import random
from typing import List

from topology.chains import alexander_chain, inductive_step_audit, is_filling, is_tree_like, non_separating_audit
from topology.models import CaseResult, SuiteConfig
from topology.realize import surface_model
from topology.surface import exhaustion_for
from suites.common import FAMILIES, case, guarded

AUDIT_STAGES = 6


def _stage_checks(chain, n: int):
    tree = is_tree_like(chain, n)
    filling = is_filling(chain, n)
    separating = non_separating_audit(chain, n)
    values = {v for _, _, v in chain.restrict(n).intersections}
    problems = []
    if not tree.tree_like:
        problems.append(f"not tree-like (cycle={list(tree.cycle)}, components={tree.components})")
    if not filling.filling:
        problems.append(f"not filling: {list(filling.regions)}")
    if separating:
        problems.append(f"separating: {separating}")
    if not values <= {1}:
        problems.append(f"intersection values {sorted(values)}")
    size = len(chain.restrict(n).curves)
    return not problems, "; ".join(problems) or f"{size} curves"


def run(cfg: SuiteConfig, rng: random.Random) -> List[CaseResult]:
    top = min(max(cfg.stages, 1), AUDIT_STAGES)
    cases = []
    for family in FAMILIES:
        ex = exhaustion_for(family, top)
        chain = alexander_chain(ex)
        for n in range(top + 1):
            cases.append(guarded(f"{family}/stage-{n}", lambda n=n: _stage_checks(chain, n)))
        for result in inductive_step_audit(surface_model(ex), top):
            cases.append(case(f"{family}/{result.case_id}", result.passed, result.detail))
        cases.append(case(f"{family}/size-0", len(chain.restrict(0).curves) == 2,
                          f"|𝒜0| = {len(chain.restrict(0).curves)}"))
    ray = alexander_chain(exhaustion_for("ray", 1))
    cases.append(case("ray/size-1", len(ray.curves) == 6, f"|𝒜1| = {len(ray.curves)}"))
    return cases
