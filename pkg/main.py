"""
surfacekit - infinite-genus surfaces, Alexander chains and twist homomorphisms
Entry point: python main.py <command> ...
"""

import argparse
import json
import os
import sys

from loguru import logger

from config.settings import settings
from suites.registry import SUITES, run_suite
from topology.chains import (
    alexander_chain,
    chain_isomorphism,
    is_filling,
    is_tree_like,
    lower_genus,
    non_separating_audit,
)
from topology.curves import as_curve, intersection
from topology.emit import emit_dot, emit_json, load_json
from topology.errors import TopologyError
from topology.homo import (
    accumulating_table,
    collapsing_table,
    identity_table,
    involution_table,
    run_pipeline,
    twist_killing_table,
)
from topology.models import Curve, HomomorphismTable, MappingClass, SuiteConfig
from topology.realize import surface_model
from topology.surface import exhaustion_for
from topology.twists import apply, braided, commutes, lantern_check, lantern_window

if settings.LANGSMITH_TRACING and settings.LANGSMITH_API_KEY:
    os.environ["LANGCHAIN_TRACING_V2"] = "true"
    os.environ["LANGCHAIN_API_KEY"] = settings.LANGSMITH_API_KEY
    os.environ["LANGCHAIN_PROJECT"] = settings.LANGSMITH_PROJECT

# ── Banner ──────────────────────────────────────────────────────────────────
BANNER = """
╔═══════════════════════════════════════════════════════════╗
║        surfacekit  •  infinite-genus surface toolkit      ║
║   Exhaust → Chain → Twist → Reconstruct                   ║
╚═══════════════════════════════════════════════════════════╝
"""


def _print(obj):
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def _curve(text: str) -> Curve:
    """A name, or a JSON curve object such as {"coords": {"v0.blue1": [1, 2]}}."""
    text = text.strip()
    return Curve.from_json_obj(json.loads(text)) if text.startswith("{") else as_curve(text)


def _word(text: str) -> MappingClass:
    return MappingClass.from_word_json(json.loads(text))


# ── Commands ────────────────────────────────────────────────────────────────

def cmd_surface(args) -> int:
    ex = exhaustion_for(args.family, args.stages)
    _print({
        "family": args.family,
        "stages": ex.stages,
        "pieces": [f"{ex.vertex_name(p.position)}:{p.kind}" for p in ex.pieces],
        "genus": list(ex.genus),
        "boundary": list(ex.boundaries[ex.stages]),
    })
    if args.out:
        emit_json(ex, args.out)
    return 0


def cmd_curve(args) -> int:
    model = surface_model(exhaustion_for(args.family, args.stages))
    a, b = _curve(args.a), _curve(args.b)
    _print({"a": a.label, "b": b.label, "intersection": intersection(a, b, model)})
    return 0


def cmd_mcg(args) -> int:
    model = surface_model(exhaustion_for(args.family, args.stages))
    if args.action == "apply":
        image = apply(_word(args.word), _curve(args.curve), model)
        _print({"curve": image.to_json_obj(), "label": image.label})
        return 0

    n = args.n if args.n is not None else max(2, args.stages - 1)
    if args.relation == "lantern":
        window = lantern_window(model, args.window)
        holds = lantern_check(window, model)
        _print({"relation": "lantern", "window": args.window, "holds": holds,
                "boundary": [c.label for c in window.boundary], "interior": [c.label for c in window.interior]})
    else:
        ta, tb = MappingClass.twist(_curve(args.a)), MappingClass.twist(_curve(args.b))
        check = braided if args.relation == "braid" else commutes
        holds = check(ta, tb, n, model)
        _print({"relation": args.relation, "a": args.a, "b": args.b, "stage": n, "holds": holds})
    return 0 if holds else 1


def cmd_chain(args) -> int:
    ex = exhaustion_for(args.family, args.stages)
    chain = alexander_chain(ex)
    n = args.n if args.n is not None else ex.stages
    status = 0

    if args.action == "build":
        _print({"curves": chain.restrict(n).names,
                "intersections": [list(t) for t in chain.restrict(n).intersections]})
        if args.out:
            emit_json(chain, args.out)
    elif args.action == "check":
        tree, filling = is_tree_like(chain, n), is_filling(chain, n)
        separating = non_separating_audit(chain, n)
        _print({"tree_like": tree.tree_like, "cycle": list(tree.cycle), "filling": filling.filling,
                "regions": list(filling.regions), "separating": separating})
        status = 0 if tree.tree_like and filling.filling and not separating else 1
    elif args.action == "iso":
        other = alexander_chain(exhaustion_for(args.other, args.stages))
        result = chain_isomorphism(chain, other, n)
        _print(json.loads(result.model_dump_json()))
        status = 0 if hasattr(result, "pairs") else 1
    elif args.action == "genus":
        _print({f"stage {k}": lower_genus(chain, k) for k in range(n + 1)})

    if args.dot:
        emit_dot(chain, args.dot, n)
    return status


TABLES = {
    "identity": lambda ex, args: identity_table(ex),
    "involution": lambda ex, args: involution_table(ex, args.pivot),
    "twist-killing": lambda ex, args: twist_killing_table(ex),
    "collapsing": lambda ex, args: collapsing_table(ex),
    "accumulating": lambda ex, args: accumulating_table(ex),
}


def cmd_homo(args) -> int:
    if args.table_file:
        tab = load_json(HomomorphismTable, args.table_file)
    else:
        tab = TABLES[args.table](exhaustion_for(args.family, args.stages), args)
    report = run_pipeline(tab, args.n if args.n is not None else tab.horizon)
    if args.out:
        emit_json(report, args.out)
    _print({
        "passed": report.passed,
        "failed_gate": report.failed_gate,
        "verdicts": [v.model_dump(exclude={"certificate"}) for v in report.verdicts],
        "hypotheses": list(report.hypotheses),
    })
    return 0 if report.passed else 1


def cmd_suite(args) -> int:
    output = args.out or os.path.join(settings.OUTPUT_DIR, f"{args.name}.json")
    cfg = SuiteConfig(name=args.name, stages=args.stages, seed=args.seed, budget=args.budget, output=output)
    try:
        report = run_suite(cfg)
    except KeyError as exc:
        logger.error(str(exc.args[0]))
        return 2
    return 0 if report.passed else 1


# ── Parser ──────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=settings.SEED)
    common.add_argument("--stages", type=int, default=settings.STAGE_BOUND)
    common.add_argument("--out", default=None, help="write a JSON report here")
    common.add_argument("--family", default="ray", help="ray | binary | <k>-rays")

    parser = argparse.ArgumentParser(prog="surfacekit", description="Infinite-genus surface toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    surface = sub.add_parser("surface", parents=[common], help="build an exhaustion")
    surface.add_argument("action", choices=["build"])
    surface.set_defaults(run=cmd_surface)

    curve = sub.add_parser("curve", parents=[common], help="curve operations")
    curve.add_argument("action", choices=["intersect"])
    curve.add_argument("a")
    curve.add_argument("b")
    curve.set_defaults(run=cmd_curve)

    mcg = sub.add_parser("mcg", parents=[common], help="mapping classes")
    mcg.add_argument("action", choices=["apply", "verify"])
    mcg.add_argument("--word", default="[]", help='JSON word, e.g. [["v0.red", 1]]')
    mcg.add_argument("--curve", default=None)
    mcg.add_argument("--relation", choices=["lantern", "braid", "commute"], default="braid")
    mcg.add_argument("--a", default=None)
    mcg.add_argument("--b", default=None)
    mcg.add_argument("--window", type=int, default=2, help="piece whose gluing circle carries the lantern")
    mcg.add_argument("--n", type=int, default=None, help="comparison stage")
    mcg.set_defaults(run=cmd_mcg)

    chain = sub.add_parser("chain", parents=[common], help="Alexander chains")
    chain.add_argument("action", choices=["build", "check", "iso", "genus"])
    chain.add_argument("--n", type=int, default=None)
    chain.add_argument("--other", default="ray", help="family to compare against (iso)")
    chain.add_argument("--dot", default=None, help="write the chain graph as DOT")
    chain.set_defaults(run=cmd_chain)

    homo = sub.add_parser("homo", parents=[common], help="reconstruction pipeline")
    homo.add_argument("action", choices=["check"])
    homo.add_argument("--table", choices=sorted(TABLES), default="identity")
    homo.add_argument("--table-file", default=None, help="HomomorphismTable JSON")
    homo.add_argument("--pivot", type=int, default=1)
    homo.add_argument("--n", type=int, default=None)
    homo.set_defaults(run=cmd_homo)

    suite = sub.add_parser("suite", parents=[common], help="run a named property suite")
    suite.add_argument("name", help=" | ".join(SUITES))
    suite.add_argument("--budget", type=int, default=settings.CASE_BUDGET, help="0 = exhaustive")
    suite.set_defaults(run=cmd_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logger.remove()
    logger.add(sys.stderr, level=settings.LOG_LEVEL)
    print(BANNER, file=sys.stderr)
    logger.info(f"surfacekit {args.command}  |  family={args.family}  stages={args.stages}  seed={args.seed}")

    try:
        return args.run(args)
    except TopologyError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return 1
    except Exception as exc:
        logger.exception(f"surfacekit error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
