"""
topology/chains.py  –  Alexander chains and their graphs: tree-likeness,
filling audit, lower genus, chain isomorphism and the stage-wise
homeomorphism induced by a chain bijection.
"""

from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union

import networkx as nx
from loguru import logger
from networkx.algorithms.isomorphism import GraphMatcher, tree_isomorphism

from topology.curves import CurveLike, as_curve, intersection, is_separating, resolve, same_curve
from topology.errors import BlueprintError, EmitError, UnsupportedError
from topology.models import (
    CaseResult,
    Chain,
    ChainBijection,
    ChainCurve,
    Curve,
    EndInvolution,
    Exhaustion,
    Failure,
    FillingCertificate,
    Frozen,
    MappingClass,
    NotIsomorphic,
    StageMap,
    TreeCertificate,
)
from topology.realize import SurfaceModel, surface_model
from topology.spine import RibbonGraph
from topology.surface import build_blueprint, build_exhaustion, chain_curve_names, parse_name, relabel_exhaustion
from topology.twists import apply, lantern_window

BRUTE_FORCE_LIMIT = 12
SEARCH_LIMIT = 16


# ── Construction ──────────────────────────────────────────────────────────

@lru_cache(maxsize=32)
def alexander_chain(ex: Exhaustion) -> Chain:
    model = surface_model(ex)
    entries = chain_curve_names(ex, ex.stages)
    values = []
    for (a, _, _), (b, _, _) in combinations(entries, 2):
        v = intersection(a, b, model)
        if v:
            values.append((a, b, v))
    logger.debug(f"alexander chain {ex.blueprint.family}/{ex.stages}: {len(entries)} curves, {len(values)} edges")
    return Chain(
        curves=tuple(ChainCurve(name=n, color=c, stage=s) for n, c, s in entries),
        intersections=tuple(values),
        exhaustion=ex,
        horizon=ex.stages,
    )


class LazyChain(Frozen):
    """Blueprint-driven stream rule for 𝒜; materialized one stage bound at a time."""

    family: str

    def materialize(self, n: int) -> Chain:
        bp = build_blueprint(self.family, max(n, 1))
        return alexander_chain(build_exhaustion(bp, n))

    def to_json_obj(self) -> dict:
        raise EmitError(f"lazy chain {self.family!r} has no stage bound; materialize it first")


# ── Chain graph ───────────────────────────────────────────────────────────

def chain_graph(chain: Chain, n: Optional[int] = None) -> nx.Graph:
    if n is not None:
        chain = chain.restrict(n)
    graph = nx.Graph()
    for c in chain.curves:
        graph.add_node(c.name, color=c.color, stage=c.stage)
    for a, b, v in chain.intersections:
        if v == 1:
            graph.add_edge(a, b)
    return graph


def is_tree_like(chain: Chain, n: int) -> TreeCertificate:
    graph = chain_graph(chain, n)
    if graph.number_of_nodes() == 0:
        return TreeCertificate(tree_like=False, components=0)
    components = nx.number_connected_components(graph)
    try:
        cycle = nx.find_cycle(graph)
        return TreeCertificate(
            tree_like=False, cycle=tuple(u for u, _ in cycle), components=components
        )
    except nx.NetworkXNoCycle:
        pass
    if components > 1:
        return TreeCertificate(tree_like=False, components=components)
    spanning = nx.bfs_tree(graph, next(iter(graph.nodes))).edges
    return TreeCertificate(tree_like=True, spanning=tuple(spanning), components=1)


# ── Filling audit ─────────────────────────────────────────────────────────

def is_filling(chain: Chain, n: int) -> FillingCertificate:
    """Template audit: full star per piece, an a-curve across every gluing circle."""
    chain = chain.restrict(n)
    ex = chain.exhaustion
    if not chain.curves:
        return FillingCertificate(filling=False, regions=("Σ without curves",))
    present: Dict[int, set] = {}
    for c in chain.curves:
        try:
            position, role = parse_name(ex, c.name)
        except KeyError:
            raise UnsupportedError(f"{c.name} is not a template curve", pair=(c.name, "")) from None
        if role.startswith("b") and not role.startswith("blue"):
            raise UnsupportedError(f"{c.name} is a boundary label, not a chain curve", pair=(c.name, ""))
        present.setdefault(position, set()).add(role)

    regions: List[str] = []
    for piece in ex.pieces[: n + 1]:
        v = ex.vertex_name(piece.position)
        roles = present.get(piece.position, set())
        if "red" not in roles:
            regions.append(f"{v}: red transversal region")
        for j in range(1, piece.blues + 1):
            if f"blue{j}" not in roles:
                regions.append(f"{v}: pants region around blue{j}")
        if piece.position > 0 and "a" not in roles:
            regions.append(f"{v}.b0: annulus around the gluing circle")
    return FillingCertificate(filling=not regions, regions=tuple(regions))


def inductive_step_audit(model: SurfaceModel, n: int) -> List[CaseResult]:
    """
    Pattern check on every four-holed window up to stage n: cuffs miss the
    interior, interior curves meet pairwise twice, and each interior curve is
    homologous mod 2 to the sum of two cuffs.
    """
    spine = model.spine
    out = []
    for c in range(1, n + 1):
        if model.exhaustion.pieces[c].parent == 0:
            continue
        window = lantern_window(model, c)
        cuffs = [resolve(x, model) for x in window.boundary]
        inner = [resolve(x, model) for x in window.interior]
        problems = []
        if any(spine.intersection(x, y) for x in cuffs for y in inner):
            problems.append("cuff meets interior")
        if any(spine.intersection(x, y) != 2 for x, y in combinations(inner, 2)):
            problems.append("interior pair not meeting twice")
        for x in inner:
            if not any(spine.homologous(x, [cuffs[i], cuffs[j]]) for i, j in combinations(range(4), 2)):
                problems.append(f"interior curve of length {len(x)} not a cuff-pair sum")
        out.append(CaseResult(
            case_id=f"window-{c}", passed=not problems, detail="; ".join(problems) or "pattern ok"
        ))
    return out


# ── Lower genus ───────────────────────────────────────────────────────────

def _tree_dp(tree: nx.Graph, root) -> int:
    """Largest induced matching: matched pairs share no vertex and no edge joins two pairs."""
    free, up, matched = {}, {}, {}
    for v in reversed(list(nx.dfs_preorder_nodes(tree, root))):
        kids = [c for c in tree.neighbors(v) if c in free]
        free[v] = sum(max(free[c], matched[c]) for c in kids)
        up[v] = sum(free[c] for c in kids)
        matched[v] = max((1 + up[c] + up[v] - free[c] for c in kids), default=float("-inf"))
    return int(max(free[root], matched[root]))


def matching_brute_force(graph: nx.Graph) -> int:
    edges = list(graph.edges)
    best = 0

    def grow(i: int, used: set, size: int):
        nonlocal best
        best = max(best, size)
        if size + (len(edges) - i) <= best:
            return
        for j in range(i, len(edges)):
            u, v = edges[j]
            if u in used or v in used:
                continue
            touched = set(graph.neighbors(u)) | set(graph.neighbors(v))
            if touched & used:
                continue
            grow(j + 1, used | {u, v}, size + 1)

    grow(0, set(), 0)
    return best


def forest_matching(graph: nx.Graph) -> int:
    return sum(
        _tree_dp(graph.subgraph(nodes), next(iter(nodes)))
        for nodes in nx.connected_components(graph)
    )


def lower_genus(chain: Chain, n: int) -> int:
    graph = chain_graph(chain, n)
    if graph.number_of_nodes() == 0:
        return 0
    if nx.is_forest(graph):
        return forest_matching(graph)
    if graph.number_of_nodes() <= BRUTE_FORCE_LIMIT:
        return matching_brute_force(graph)
    raise UnsupportedError(f"chain graph with cycles on {graph.number_of_nodes()} curves")


# ── Chain isomorphism ─────────────────────────────────────────────────────

def _preserves(g1: nx.Graph, g2: nx.Graph, mapping: Dict[str, str]) -> bool:
    if set(mapping) != set(g1.nodes) or set(mapping.values()) != set(g2.nodes):
        return False
    return all(
        g1.has_edge(a, b) == g2.has_edge(mapping[a], mapping[b])
        for a, b in combinations(g1.nodes, 2)
    )


def chain_isomorphism(
    c1: Chain, c2: Chain, n: int, hint: Optional[Dict[str, str]] = None
) -> Union[ChainBijection, NotIsomorphic]:
    g1, g2 = chain_graph(c1, n), chain_graph(c2, n)
    if g1.number_of_nodes() != g2.number_of_nodes():
        return NotIsomorphic(invariant=f"vertex count {g1.number_of_nodes()} != {g2.number_of_nodes()}")
    d1 = sorted(d for _, d in g1.degree)
    d2 = sorted(d for _, d in g2.degree)
    if d1 != d2:
        return NotIsomorphic(invariant=f"degree multiset {d1} != {d2}")

    if hint is None and set(g1.nodes) == set(g2.nodes):
        hint = {v: v for v in g1.nodes}
    if hint is not None and _preserves(g1, g2, hint):
        return ChainBijection(pairs=tuple((a, hint[a]) for a in c1.restrict(n).names))

    if nx.is_tree(g1) and nx.is_tree(g2):
        pairs = tree_isomorphism(g1, g2)
        if not pairs:
            h1 = nx.weisfeiler_lehman_graph_hash(g1)
            h2 = nx.weisfeiler_lehman_graph_hash(g2)
            return NotIsomorphic(invariant=f"canonical tree codes differ ({h1} != {h2})")
        mapping = dict(pairs)
    elif g1.number_of_nodes() <= SEARCH_LIMIT:
        matcher = GraphMatcher(g1, g2)
        if not matcher.is_isomorphic():
            return NotIsomorphic(invariant="no isomorphism in exhaustive search")
        mapping = matcher.mapping
    else:
        raise UnsupportedError(f"non-tree chain graphs on {g1.number_of_nodes()} curves exceed the search bound")
    return ChainBijection(pairs=tuple((a, mapping[a]) for a in c1.restrict(n).names))


# ── Induced homeomorphism ─────────────────────────────────────────────────

def _propagate(g: RibbonGraph, h: RibbonGraph, seed: int, image: int) -> Optional[Dict[int, int]]:
    """The ribbon map sending seed to image: it commutes with α and σ, or it does not exist."""
    phi = {seed: image}
    stack = [seed]
    while stack:
        d = stack.pop()
        for nd, ni in ((d ^ 1, phi[d] ^ 1), (g.sigma(d), h.sigma(phi[d]))):
            if nd not in phi:
                phi[nd] = ni
                stack.append(nd)
            elif phi[nd] != ni:
                return None
    return phi


@lru_cache(maxsize=64)
def dart_map(stage_map: StageMap) -> Optional[Dict[int, int]]:
    """Uncapped dart bijection realizing the stage map, or None when the rotations disagree."""
    src, dst = surface_model(stage_map.domain), surface_model(stage_map.codomain)
    seed = 2 * src.edges[("loop", 0, 1)]
    phi = _propagate(src.graph, dst.graph, seed, 2 * dst.edges[("loop", 0, 1)] + int(stage_map.flip))
    if phi is None or len(phi) != 2 * len(dst.graph.tails) or len(set(phi.values())) != len(phi):
        return None
    return phi


def piece_names(stage_map: StageMap) -> Dict[str, str]:
    return {f"v{i}": f"v{j}" for i, j in stage_map.piece_map}


def _role_family(role: str, blues: int) -> List[str]:
    if role.startswith("blue"):
        family = [f"blue{j}" for j in range(1, blues + 1)]
    elif role.startswith("b"):
        family = [f"b{j}" for j in range(blues)]
    else:
        family = [role]
    return sorted(family, key=lambda r: r != role)


def _carry(stage_map: StageMap, phi: Dict[int, int], position: int, role: str, ancestor: str) -> Curve:
    src, dst = surface_model(stage_map.domain), surface_model(stage_map.codomain)
    path = dst.spine.expand(phi[d] for d in src.uncapped_path(position, role))
    target = stage_map.positions().get(position)
    if target is not None:
        for candidate in _role_family(role, dst.exhaustion.pieces[target].blues):
            name = dst.name(target, candidate)
            if dst.path(name) == path:
                return Curve.named(name)
    return Curve.carried(path, ancestor=ancestor)


def transport(stage_map: StageMap, c: CurveLike) -> Curve:
    """Push a domain curve through the stage map."""
    c = as_curve(c)
    phi = dart_map(stage_map)
    if phi is None:
        raise UnsupportedError("stage map has no ribbon realization")
    src, dst = surface_model(stage_map.domain), surface_model(stage_map.codomain)
    if c.kind == "named":
        position, role = src.locate(c.name)
        return _carry(stage_map, phi, position, role, c.name)
    if c.kind == "coords":
        entries = {}
        for gamma, m, t in c.coords:
            position, role = src.locate(gamma)
            image = _carry(stage_map, phi, position, role, gamma)
            if image.kind != "named":
                raise UnsupportedError(f"pants curve {gamma} leaves the codomain pants decomposition")
            entries[dst.pants_name(image.name) or image.name] = (m, t)
        return Curve.coord(entries)
    return Curve.carried(dst.spine.expand(phi[d] for d in c.path), ancestor=c.ancestor)


def inverse_map(stage_map: StageMap) -> StageMap:
    return StageMap(
        domain=stage_map.codomain,
        codomain=stage_map.domain,
        stage=stage_map.stage,
        piece_map=tuple(sorted((j, i) for i, j in stage_map.piece_map)),
        flip=stage_map.flip,
    )


def _color(role: str) -> str:
    return "blue" if role.startswith("blue") else role


def _piece_map(psi: Dict[str, str], ex: Exhaustion, ex2: Exhaustion, N: int) -> Union[Dict[int, int], Failure]:
    pm: Dict[int, int] = {}
    for name, _, stage in chain_curve_names(ex, N):
        if name not in psi:
            return Failure(stage=stage, reason="ψ is not defined on the whole chain", witness=name)
        position, role = parse_name(ex, name)
        try:
            image, image_role = parse_name(ex2, psi[name])
        except KeyError:
            return Failure(stage=stage, reason="image is not a template curve of the codomain", witness=psi[name])
        if _color(role) != _color(image_role):
            return Failure(stage=stage, reason=f"ψ sends a {role} curve to a {image_role} curve", witness=name)
        if pm.setdefault(position, image) != image:
            return Failure(stage=stage, reason="ψ splits one piece across several", witness=name)
    return pm


def _audit_stages(pm: Dict[int, int], ex: Exhaustion, ex2: Exhaustion, N: int) -> Optional[Failure]:
    for k in range(N + 1):
        if k > ex2.stages:
            return Failure(stage=k, reason="codomain has fewer stages")
        if sorted(pm[i] for i in range(k + 1)) != list(range(k + 1)):
            return Failure(stage=k, reason="piece map is not stage-compatible")
        mine, theirs = ex.pieces[k], ex2.pieces[pm[k]]
        if mine.kind != theirs.kind:
            return Failure(stage=k, reason=f"piece kinds differ: {mine.kind} vs {theirs.kind}",
                           witness=ex.vertex_name(k))
        if ex.genus[k] != ex2.genus[k]:
            return Failure(stage=k, reason=f"genus {ex.genus[k]} vs {ex2.genus[k]}")
        if len(ex.boundaries[k]) != len(ex2.boundaries[k]):
            return Failure(stage=k, reason=f"|∂Σ{k}| {len(ex.boundaries[k])} vs {len(ex2.boundaries[k])}")
        if k > 0 and pm[mine.parent] != theirs.parent:
            return Failure(stage=k, reason="gluing not preserved", witness=ex.vertex_name(k))
    return None


def _audit_ribbon(stage_map: StageMap, N: int) -> Optional[Failure]:
    """Every edge of Σ_N lands in the piece the stage map assigns to its own piece."""
    phi = dart_map(stage_map)
    if phi is None:
        return Failure(stage=N, reason="rotation systems differ")
    src, dst = surface_model(stage_map.domain), surface_model(stage_map.codomain)
    pm = stage_map.positions()
    for e, role in enumerate(src.graph.roles):
        if role[1] > N:
            continue
        if dst.edge_role(phi[2 * e] >> 1)[1] != pm[role[1]]:
            return Failure(stage=role[1], reason="edge leaves its piece", witness=str(role))
    return None


def realize_involution(ex: Exhaustion, involution: EndInvolution) -> StageMap:
    """The template-preserving homeomorphism onto the image exhaustion of an end involution."""
    image = relabel_exhaustion(ex, involution)
    pairs = tuple(sorted(zip(ex.relabel, image.relabel)))
    for flip in (False, True):
        h = StageMap(domain=ex, codomain=image, stage=ex.stages, piece_map=pairs, flip=flip)
        if _audit_ribbon(h, ex.stages) is None:
            logger.debug(f"involution at v{involution.pivot} realized with flip={flip}: {piece_names(h)}")
            return h
    raise BlueprintError(
        f"swapping the subtrees below v{involution.pivot} moves template curves off the template",
        vertex=involution.pivot,
    )


def induced_homeomorphism(
    psi: Union[ChainBijection, Dict[str, str]], ex: Exhaustion, ex2: Exhaustion, N: int
) -> Union[StageMap, Failure]:
    psi = psi.as_dict() if isinstance(psi, ChainBijection) else dict(psi)
    if N > ex.stages:
        return Failure(stage=N, reason=f"domain built only to stage {ex.stages}")
    pm = _piece_map(psi, ex, ex2, N)
    if isinstance(pm, Failure):
        return pm
    failure = _audit_stages(pm, ex, ex2, N)
    if failure is not None:
        return failure

    src, dst = surface_model(ex), surface_model(ex2)
    pairs = tuple(sorted((ex.relabel[i], ex2.relabel[j]) for i, j in pm.items()))
    for flip in (False, True):
        h = StageMap(domain=ex, codomain=ex2, stage=N, piece_map=pairs, flip=flip)
        failure = _audit_ribbon(h, N)
        if failure is not None:
            continue
        # ψ must be the template correspondence the ribbon map induces
        missed = next((a for a in src.chain_names(N) if not same_curve(transport(h, a), psi[a], dst)), None)
        if missed is None:
            break
        failure = Failure(stage=N, reason="ψ is not induced by the ribbon map", witness=missed)
    else:
        return failure

    if N >= 1:
        for a in src.chain_names(N):
            twist, image_twist = MappingClass.twist(a), MappingClass.twist(psi[a])
            for m in src.marking(N - 1):
                left = apply(image_twist, transport(h, m), dst)
                right = transport(h, apply(twist, m, src))
                if not same_curve(left, right, dst):
                    return Failure(stage=N, reason="conjugation check failed", witness=f"t_{a} on {m.label}")
    logger.info(f"stage map recovered through stage {N}: {piece_names(h)}")
    return h


def non_separating_audit(chain: Chain, n: int) -> List[str]:
    """Chain curves at stage ≤ n that separate Σ_H."""
    model = surface_model(chain.exhaustion)
    return [c.name for c in chain.restrict(n).curves if is_separating(c.name, model)]
