"""
topology/realize.py  –  SurfaceModel: an Exhaustion realized as a capped spine.

Each piece is a red cycle through k crossing vertices with one blue loop per
crossing. Every non-root piece is plumbed to its parent by the two edges of
its a-curve, which run between a point p on the child's first red arc and a
point q on the parent's red arc facing the glued label.
"""

from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from loguru import logger

from topology.errors import StageError, UnresolvedCurveError
from topology.models import Curve, Exhaustion, Window
from topology.spine import Path, RibbonGraph, Spine
from topology.surface import canonical_label, chain_curve_names, parse_name


class SurfaceModel:
    def __init__(self, ex: Exhaustion):
        self.exhaustion = ex
        self.horizon = ex.stages
        self.graph = RibbonGraph()
        self.edges: Dict[tuple, int] = {}
        self.vertices: Dict[tuple, int] = {}
        self._plumb()
        self.spine = Spine(self.graph)
        self._paths: Dict[str, Path] = {}
        self.twist_cache: Dict[tuple, Path] = {}
        logger.debug(
            f"model {ex.blueprint.family}/{ex.stages}: {len(self.graph.alive)} edges, "
            f"{len(self.spine.graph.alive)} after capping"
        )

    # ── Plumbing ──────────────────────────────────────────────────────────

    def _segments(self, position: int, j: int) -> List[int]:
        segs = [self.edges[("arc", position, j, 0)]]
        if ("arc", position, j, 1) in self.edges:
            segs.append(self.edges[("arc", position, j, 1)])
        return segs

    def _plumb(self):
        ex, g = self.exhaustion, self.graph
        split: Dict[Tuple[int, int], tuple] = {}
        for piece in ex.pieces[1:]:
            split[(piece.parent, piece.slot + 1)] = ("q", piece.position)
            split[(piece.position, 1)] = ("p", piece.position)

        for piece in ex.pieces:
            for j in range(1, piece.blues + 1):
                self.vertices[("x", piece.position, j)] = g.add_vertex(("x", piece.position, j))
        for piece in ex.pieces[1:]:
            for role in (("p", piece.position), ("q", piece.position)):
                self.vertices[role] = g.add_vertex(role)

        for piece in ex.pieces:
            pos, k = piece.position, piece.blues
            for j in range(1, k + 1):
                start = self.vertices[("x", pos, j)]
                end = self.vertices[("x", pos, j % k + 1)]
                mid = split.get((pos, j))
                if mid is None:
                    self.edges[("arc", pos, j, 0)] = g.add_edge(start, end, pos, ("arc", pos, j, 0))
                else:
                    v = self.vertices[mid]
                    self.edges[("arc", pos, j, 0)] = g.add_edge(start, v, pos, ("arc", pos, j, 0))
                    self.edges[("arc", pos, j, 1)] = g.add_edge(v, end, pos, ("arc", pos, j, 1))
            for j in range(1, k + 1):
                x = self.vertices[("x", pos, j)]
                self.edges[("loop", pos, j)] = g.add_edge(x, x, pos, ("loop", pos, j))

        for piece in ex.pieces[1:]:
            c = piece.position
            p, q = self.vertices[("p", c)], self.vertices[("q", c)]
            self.edges[("a", c, 1)] = g.add_edge(p, q, c, ("a", c, 1))
            self.edges[("a", c, 2)] = g.add_edge(q, p, c, ("a", c, 2))

        for piece in ex.pieces:
            pos, k = piece.position, piece.blues
            for j in range(1, k + 1):
                prev = (j - 2) % k + 1
                loop = self.edges[("loop", pos, j)]
                g.set_rotation(self.vertices[("x", pos, j)], [
                    2 * self._segments(pos, j)[0],
                    2 * loop,
                    2 * self._segments(pos, prev)[-1] + 1,
                    2 * loop + 1,
                ])
        for piece in ex.pieces[1:]:
            c = piece.position
            f1, f2 = self.edges[("a", c, 1)], self.edges[("a", c, 2)]
            e1, e2 = self._segments(c, 1)
            g1, g2 = self._segments(piece.parent, piece.slot + 1)
            g.set_rotation(self.vertices[("p", c)], [2 * e2, 2 * f1, 2 * e1 + 1, 2 * f2 + 1])
            g.set_rotation(self.vertices[("q", c)], [2 * g2, 2 * f2, 2 * g1 + 1, 2 * f1 + 1])

    # ── Named curves ──────────────────────────────────────────────────────

    def _loop(self, position: int, j: int) -> int:
        return 2 * self.edges[("loop", position, j)]

    def uncapped_path(self, position: int, role: str) -> List[int]:
        piece = self.exhaustion.pieces[position]
        k = piece.blues
        if role == "red":
            return [2 * e for j in range(1, k + 1) for e in self._segments(position, j)]
        if role == "a":
            return [2 * self.edges[("a", position, 1)], 2 * self.edges[("a", position, 2)]]
        if role.startswith("blue"):
            return [self._loop(position, int(role[4:]))]
        # label b_{J-1} is the face walk along arc J
        arc = int(role[1:]) + 1
        segs = self._segments(position, arc)
        return (
            [2 * e for e in segs]
            + [self._loop(position, arc % k + 1) + 1]
            + [2 * e + 1 for e in reversed(segs)]
            + [self._loop(position, arc)]
        )

    def locate(self, name: str) -> Tuple[int, str]:
        try:
            return parse_name(self.exhaustion, canonical_label(self.exhaustion, name))
        except KeyError:
            raise UnresolvedCurveError(name) from None

    def path(self, name: str) -> Path:
        if name not in self._paths:
            position, role = self.locate(name)
            self._paths[name] = self.spine.expand(self.uncapped_path(position, role))
        return self._paths[name]

    def stage_of_name(self, name: str) -> int:
        return self.spine.stage_of(self.path(name))

    def name(self, position: int, role: str) -> str:
        return f"{self.exhaustion.vertex_name(position)}.{role}"

    # ── Pants curves and windows ──────────────────────────────────────────

    @property
    def pants_curves(self) -> List[str]:
        ex = self.exhaustion
        out = [self.name(p.position, f"blue{j}") for p in ex.pieces for j in range(1, p.blues + 1)]
        out += [self.name(p.position, "b0") for p in ex.pieces[1:]]
        return out

    def pants_name(self, name: str) -> Optional[str]:
        """Canonical pants-curve name, or None when `name` is not a pants curve."""
        canon = canonical_label(self.exhaustion, name)
        return canon if canon in self.pants_curves else None

    def windows(self) -> Dict[str, Window]:
        ex = self.exhaustion
        out = {
            self.name(0, "blue1"): Window(
                kind="torus",
                core=self.name(0, "blue1"),
                transversal=self.name(0, "red"),
                cuffs=(canonical_label(ex, self.name(0, "b0")),),
                stage=0,
            )
        }
        for piece in ex.pieces[1:]:
            if piece.parent == 0:
                continue
            parent = ex.pieces[piece.parent]
            s, k = piece.slot, parent.blues
            out[self.name(piece.position, "b0")] = Window(
                kind="four_holed",
                core=self.name(piece.position, "b0"),
                transversal=self.name(piece.position, "a"),
                cuffs=(
                    self.name(parent.position, f"blue{s + 1}"),
                    self.name(parent.position, f"blue{(s + 1) % k + 1}"),
                    self.name(piece.position, "blue1"),
                    self.name(piece.position, "blue2"),
                ),
                stage=piece.position,
            )
        return out

    def window_of(self, pants_curve: str) -> Optional[Window]:
        name = self.pants_name(pants_curve)
        return self.windows().get(name) if name else None

    # ── Markings ──────────────────────────────────────────────────────────

    def chain_names(self, n: int) -> List[str]:
        return [name for name, _, _ in chain_curve_names(self.exhaustion, n)]

    def marking(self, n: int) -> List[Curve]:
        """𝒜ₙ₊₁ ∪ ∂Σₙ, the marking equal_mc compares on."""
        if n + 1 > self.horizon:
            raise StageError(f"marking of stage {n} needs horizon >= {n + 1}, model has {self.horizon}", stage=n)
        return self._dedupe(self.chain_names(n + 1) + list(self.exhaustion.boundaries[n]))

    def inner_marking(self, n: int) -> List[Curve]:
        """𝒜ₙ ∪ ∂Σₙ: curves contained in Σₙ."""
        if not 0 <= n <= self.horizon:
            raise StageError(f"stage {n} outside model stages 0..{self.horizon}", stage=n)
        return self._dedupe(self.chain_names(n) + list(self.exhaustion.boundaries[n]))

    def probe_curves(self, n: int) -> List[Curve]:
        n = min(n, self.horizon)
        return self.marking(n) if n + 1 <= self.horizon else self.inner_marking(n)

    def _dedupe(self, names: List[str]) -> List[Curve]:
        seen, out = set(), []
        for name in names:
            key = self.path(name)
            if key not in seen:
                seen.add(key)
                out.append(Curve.named(name))
        return out

    # ── Lantern candidates ────────────────────────────────────────────────

    def lantern_loops(self, c: int) -> List[List[int]]:
        """Based loops at q: around a parent cuff, over to p, around a child cuff, back."""
        piece = self.exhaustion.pieces[c]
        parent = self.exhaustion.pieces[piece.parent]
        arc = piece.slot + 1
        g1, g2 = self._segments(parent.position, arc)
        e1, e2 = self._segments(c, 1)
        f1, f2 = self.edges[("a", c, 1)], self.edges[("a", c, 2)]
        b_here = self._loop(parent.position, arc)
        b_next = self._loop(parent.position, arc % parent.blues + 1)
        b1, b2 = self._loop(c, 1), self._loop(c, 2)

        parent_loops = []
        for sign in (0, 1):
            parent_loops.append([2 * g1 + 1, b_here ^ sign, 2 * g1])
            parent_loops.append([2 * g2, b_next ^ sign, 2 * g2 + 1])
        child_loops = []
        for sign in (0, 1):
            child_loops.append([2 * e1 + 1, b1 ^ sign, 2 * e1])
            child_loops.append([2 * e2, b2 ^ sign, 2 * e2 + 1])
        out = []
        for around_parent in parent_loops:
            for go in (2 * f2, 2 * f1 + 1):
                for around_child in child_loops:
                    for back in (2 * f1, 2 * f2 + 1):
                        out.append(around_parent + [go] + around_child + [back])
        return out

    # ── Ribbon structure by role ──────────────────────────────────────────

    def edge_role(self, e: int) -> tuple:
        return self.graph.roles[e]

    def vertex_role(self, v: int) -> tuple:
        return self.graph.vertex_roles[v]


@lru_cache(maxsize=32)
def surface_model(ex: Exhaustion) -> SurfaceModel:
    return SurfaceModel(ex)
