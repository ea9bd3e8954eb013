"""
topology/surface.py  –  Tree blueprints and the exhaustions Σ0 ⊂ Σ1 ⊂ … glued from
genus-one template pieces.

Vertices carry base-two heap addresses ("1" is the root, a child appends a
bit) and are enumerated breadth-first, so every index exceeds its parent's.
The piece at vertex i is F_{valence(i)} (F1 at the root). A non-root piece
glues its b0 to the parent's b_{1 + child index}; the root glues b0 to its
only child.
"""

import re
from functools import lru_cache
from typing import List, Optional, Tuple

import networkx as nx
from loguru import logger

from topology.errors import BlueprintError, StageError
from topology.models import (
    BlueprintVertex,
    EndInvolution,
    Exhaustion,
    Piece,
    TemplateCurve,
    TemplatePiece,
    TreeBlueprint,
)

_K_RAYS = re.compile(r"^(\d+)-rays$")
_NAME = re.compile(r"^v(\d+)\.(red|a|blue\d+|b\d+)$")


# ── Blueprints ────────────────────────────────────────────────────────────

def _valence_rule(end_spec: str):
    if end_spec == "ray":
        return lambda address: 2
    if end_spec == "binary":
        return lambda address: 3
    match = _K_RAYS.match(end_spec)
    if match:
        k = int(match.group(1))
        if k < 1:
            raise BlueprintError(f"k-rays needs k >= 1, got {end_spec!r}")
        splits = {"10" + "1" * j for j in range(k - 1)}
        return lambda address: 3 if address in splits else 2
    raise BlueprintError(
        f"unsupported end spec {end_spec!r}; expected 'ray', 'binary' or '<k>-rays'"
    )


@lru_cache(maxsize=64)
def build_blueprint(end_spec: str, depth: int) -> TreeBlueprint:
    """Prune the infinite binary tree to the family's shape, levels 0..depth."""
    if depth < 1:
        raise BlueprintError(f"depth must be >= 1, got {depth}")
    valence_of = _valence_rule(end_spec)

    level: List[Tuple[str, Optional[int]]] = [("1", None)]
    vertices: List[BlueprintVertex] = []
    for d in range(depth + 1):
        next_level = []
        for address, parent in sorted(level, key=lambda x: x[0]):
            index = len(vertices)
            valence = 1 if address == "1" else valence_of(address)
            vertices.append(BlueprintVertex(index=index, address=address, parent=parent, valence=valence))
            n_children = 1 if address == "1" else valence - 1
            for bit in "01"[:n_children]:
                next_level.append((address + bit, index))
        level = next_level
    logger.debug(f"blueprint {end_spec}/{depth}: {len(vertices)} vertices")
    return TreeBlueprint(family=end_spec, depth=depth, vertices=tuple(vertices))


def subtree(bp: TreeBlueprint, index: int) -> List[int]:
    prefix = bp.vertices[index].address
    return [v.index for v in bp.vertices if v.address.startswith(prefix)]


# ── Templates ─────────────────────────────────────────────────────────────

_BLUES = {"F1": 1, "F2": 2, "F3": 3}


@lru_cache(maxsize=None)
def template_piece(kind: str) -> TemplatePiece:
    """Star template: one red crossing k blues once each, in cyclic order."""
    k = _BLUES[kind]
    blues = [f"blue{j}" for j in range(1, k + 1)]
    if k == 1:
        pants = (("blue1", "blue1", "b0"),)
    else:
        pants = tuple((f"blue{j}", f"b{j - 1}", f"blue{j % k + 1}") for j in range(1, k + 1))
    return TemplatePiece(
        kind=kind,
        labels=tuple(f"b{j}" for j in range(k)),
        curves=tuple(TemplateCurve(role=b, color="blue") for b in blues)
        + (TemplateCurve(role="red", color="red"),),
        intersections=tuple(("red", b, 1) for b in blues),
        complement=tuple(("annulus", f"b{j}") for j in range(k)),
        pants=pants,
    )


# ── Exhaustions ───────────────────────────────────────────────────────────

def _assemble(bp: TreeBlueprint, n: int, relabel: Tuple[int, ...]) -> Exhaustion:
    """Position i holds blueprint vertex relabel[i], glued where the tree puts it."""
    name = lambda i: f"v{relabel[i]}"
    pieces: List[Piece] = []
    gluing: List[Tuple[str, str]] = []
    for position, index in enumerate(relabel[: n + 1]):
        v = bp.vertices[index]
        if v.parent is None:
            pieces.append(Piece(position=0, kind="F1"))
            continue
        if v.parent not in relabel[:position]:
            raise BlueprintError(f"vertex {index} comes before its parent in the exhaustion order", vertex=index)
        parent = relabel.index(v.parent)
        slot = 0 if v.parent == 0 else 1 + bp.children(v.parent).index(index)
        pieces.append(Piece(position=position, kind=f"F{v.valence}", parent=parent, slot=slot))
        gluing.append((f"{name(parent)}.b{slot}", f"{name(position)}.b0"))

    boundaries = []
    for m in range(n + 1):
        glued = set()
        for parent_label, child_label in gluing[:m]:
            glued.update((parent_label, child_label))
        labels = [
            f"{name(p.position)}.b{j}"
            for p in pieces[: m + 1]
            for j in range(p.blues)
        ]
        boundaries.append(tuple(l for l in labels if l not in glued))

    return Exhaustion(
        blueprint=bp,
        stages=n,
        pieces=tuple(pieces),
        gluing=tuple(gluing),
        relabel=relabel,
        boundaries=tuple(boundaries),
        genus=tuple(m + 1 for m in range(n + 1)),
    )


@lru_cache(maxsize=64)
def build_exhaustion(bp: TreeBlueprint, n: int) -> Exhaustion:
    if n < 0:
        raise StageError(f"stage count must be >= 0, got {n}", stage=n)
    if n >= len(bp.vertices):
        raise StageError(
            f"blueprint {bp.family}/{bp.depth} has {len(bp.vertices)} vertices; "
            f"too shallow for {n} stages",
            stage=n,
        )
    return _assemble(bp, n, tuple(range(n + 1)))


def exhaustion_for(end_spec: str, n: int) -> Exhaustion:
    """Σ0 ⊂ … ⊂ Σn on the shallowest blueprint of the family that has n + 1 vertices."""
    depth = 1
    while len(build_blueprint(end_spec, depth).vertices) <= n:
        depth += 1
    return build_exhaustion(build_blueprint(end_spec, depth), n)


def stage_genus(ex: Exhaustion, n: int) -> int:
    _check_stage(ex, n)
    return ex.genus[n]


def stage_boundary(ex: Exhaustion, n: int) -> Tuple[str, ...]:
    _check_stage(ex, n)
    return ex.boundaries[n]


def _check_stage(ex: Exhaustion, n: int):
    if not 0 <= n <= ex.stages:
        raise StageError(f"stage {n} outside built stages 0..{ex.stages}", stage=n)


# ── Names ─────────────────────────────────────────────────────────────────

def parse_name(ex: Exhaustion, name: str) -> Tuple[int, str]:
    """'v{label}.{role}' -> (position, role). Raises KeyError when unknown."""
    match = _NAME.match(name)
    if not match:
        raise KeyError(name)
    position = ex.position_of(int(match.group(1)))
    role = match.group(2)
    piece = ex.pieces[position]
    if role == "a" and position == 0:
        raise KeyError(name)
    if role.startswith("blue") and not 1 <= int(role[4:]) <= piece.blues:
        raise KeyError(name)
    if role.startswith("b") and not role.startswith("blue") and not 0 <= int(role[1:]) < piece.blues:
        raise KeyError(name)
    return position, role


def canonical_label(ex: Exhaustion, name: str) -> str:
    """Glued parent labels resolve to the child's b0 name."""
    for parent_label, child_label in ex.gluing:
        if name == parent_label:
            return child_label
    return name


def glued_child(ex: Exhaustion, label: str) -> Optional[int]:
    label = canonical_label(ex, label)
    position, role = parse_name(ex, label)
    if role == "b0" and position > 0:
        return position
    return None


def chain_curve_names(ex: Exhaustion, n: int) -> List[Tuple[str, str, int]]:
    """(name, color, stage) of 𝒜ₙ in chain order."""
    _check_stage(ex, n)
    root = ex.vertex_name(0)
    out = [(f"{root}.blue1", "blue", 0), (f"{root}.red", "red", 0)]
    for piece in ex.pieces[1: n + 1]:
        v = ex.vertex_name(piece.position)
        out += [(f"{v}.blue{j}", "blue", piece.position) for j in range(1, piece.blues + 1)]
        out += [(f"{v}.red", "red", piece.position), (f"{v}.a", "extra", piece.position)]
    return out


# ── Separation audit ──────────────────────────────────────────────────────

def separates_later_stage(ex: Exhaustion, label: str, n: int) -> bool:
    """Does the ∂Σₙ curve `label` cut Σ_{n+2} (or the last built stage) in two?"""
    _check_stage(ex, n)
    if label not in ex.boundaries[n]:
        raise KeyError(f"{label} is not a component of ∂Σ{n}")
    m = min(n + 2, ex.stages)
    graph = nx.Graph()
    graph.add_nodes_from(range(m + 1))
    cut = None
    for (parent_label, child_label), piece in zip(ex.gluing, ex.pieces[1:]):
        if piece.position > m:
            break
        if label in (parent_label, child_label):
            cut = (piece.parent, piece.position)
            continue
        graph.add_edge(piece.parent, piece.position)
    if cut is None:
        # boundary-parallel in Σ_m: it cuts off an annulus
        return nx.number_connected_components(graph) == 1
    return nx.number_connected_components(graph) == 2


# ── End involutions ───────────────────────────────────────────────────────

def _flip(bits: str) -> str:
    return bits.translate(str.maketrans("01", "10"))


def _mirror(bp: TreeBlueprint, c1: int, c2: int, translate) -> Optional[List[int]]:
    """Vertex permutation swapping the subtrees at c1 and c2 via `translate` on address suffixes."""
    a1, a2 = bp.vertices[c1].address, bp.vertices[c2].address
    addresses = bp.by_address()
    mapping = list(range(len(bp.vertices)))
    for src, dst in ((a1, a2), (a2, a1)):
        for v in bp.vertices:
            if not v.address.startswith(src):
                continue
            image = addresses.get(dst + translate(v.address[len(src):]))
            if image is None or bp.vertices[image].valence != v.valence:
                return None
            mapping[v.index] = image
    return mapping


def blueprint_involution(bp: TreeBlueprint, n: int) -> EndInvolution:
    """Swap the two child subtrees of vertex n, mirroring one onto the other."""
    if not 0 <= n < len(bp.vertices):
        raise BlueprintError(f"vertex {n} not in blueprint", vertex=n)
    kids = bp.children(n)
    if len(kids) < 2:
        raise BlueprintError(
            f"vertex {n} has {len(kids)} child subtree(s); no disjoint isomorphic pair to swap",
            vertex=n,
        )
    c1, c2 = kids[0], kids[1]
    mapping = _mirror(bp, c1, c2, _flip) or _mirror(bp, c1, c2, str)
    if mapping is None:
        raise BlueprintError(f"subtrees at {c1} and {c2} are not isomorphic", vertex=c1)

    order_two = all(mapping[mapping[i]] == i for i in range(len(mapping)))
    return EndInvolution(pivot=n, roots=(c1, c2), mapping=tuple(mapping), order_two=order_two)


def relabel_exhaustion(ex: Exhaustion, involution: EndInvolution) -> Exhaustion:
    """The image exhaustion: position i holds τ(relabel[i]) with that vertex's own gluing."""
    relabel = tuple(involution(ex.relabel[i]) for i in range(ex.stages + 1))
    return _assemble(ex.blueprint, ex.stages, relabel)
