"""
topology/spine.py  –  Oriented ribbon graphs and closed dart paths on them.

Darts: edge e has darts 2e (leaving its tail) and 2e+1 (leaving its head), so
α(d) = d ^ 1. Each vertex stores its darts in counterclockwise order; faces
are the orbits of φ = σ∘α and keep the face on the right.

A `Spine` is a ribbon graph whose disk faces have been capped away. Every
remaining face is a boundary component, so closed curves on the surface are
exactly the cyclically reduced closed paths up to rotation. Deleted darts
are remembered as path substitutions, so paths written on the uncapped graph
expand to paths on the spine.
"""

from collections import defaultdict
from functools import cmp_to_key
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from loguru import logger

from config.settings import settings
from topology.errors import ConstructionError, UnsupportedError

Path = Tuple[int, ...]


# ── Path algebra ──────────────────────────────────────────────────────────

def reduce_path(darts: Iterable[int]) -> List[int]:
    """Cancel every backtrack d, α(d)."""
    stack: List[int] = []
    for d in darts:
        if stack and stack[-1] == d ^ 1:
            stack.pop()
        else:
            stack.append(d)
    return stack


def cyclic_reduce(darts: Iterable[int]) -> List[int]:
    path = reduce_path(darts)
    lo, hi = 0, len(path)
    while hi - lo >= 2 and path[hi - 1] == path[lo] ^ 1:
        lo += 1
        hi -= 1
    return path[lo:hi]


def reverse(path: Sequence[int]) -> Path:
    return tuple(d ^ 1 for d in reversed(path))


def least_rotation(seq: Sequence[int]) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    s = list(seq) * 2
    fail = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


def _rotate(path: Sequence[int], k: int) -> Path:
    return tuple(path[k:]) + tuple(path[:k])


def canonical(darts: Iterable[int]) -> Path:
    """Least rotation over both orientations of the cyclic reduction."""
    path = cyclic_reduce(darts)
    if not path:
        return ()
    back = reverse(path)
    return min(_rotate(path, least_rotation(path)), _rotate(back, least_rotation(back)))


# ── Ribbon graph ──────────────────────────────────────────────────────────

class RibbonGraph:
    def __init__(self):
        self.tails: List[int] = []
        self.heads: List[int] = []
        self.stages: List[int] = []
        self.roles: List[tuple] = []
        self.vertex_roles: List[tuple] = []
        self.rotation: Dict[int, List[int]] = {}
        self.alive: Set[int] = set()
        self._pos: Optional[Dict[int, int]] = None

    # construction
    def add_vertex(self, role: tuple) -> int:
        self.vertex_roles.append(role)
        return len(self.vertex_roles) - 1

    def add_edge(self, tail: int, head: int, stage: int, role: tuple) -> int:
        self.tails.append(tail)
        self.heads.append(head)
        self.stages.append(stage)
        self.roles.append(role)
        e = len(self.tails) - 1
        self.alive.add(e)
        return e

    def set_rotation(self, vertex: int, darts: List[int]):
        for d in darts:
            if self.origin(d) != vertex:
                raise ConstructionError(f"dart {d} does not leave vertex {self.vertex_roles[vertex]}")
        self.rotation[vertex] = list(darts)
        self._pos = None

    def copy(self) -> "RibbonGraph":
        g = RibbonGraph()
        g.tails, g.heads = list(self.tails), list(self.heads)
        g.stages, g.roles = list(self.stages), list(self.roles)
        g.vertex_roles = list(self.vertex_roles)
        g.rotation = {v: list(r) for v, r in self.rotation.items()}
        g.alive = set(self.alive)
        return g

    def delete_edge(self, e: int):
        for d in (2 * e, 2 * e + 1):
            self.rotation[self.origin(d)].remove(d)
        self.alive.discard(e)
        self._pos = None

    # queries
    def origin(self, d: int) -> int:
        e = d >> 1
        return self.tails[e] if d % 2 == 0 else self.heads[e]

    def stage(self, d: int) -> int:
        return self.stages[d >> 1]

    def is_a(self, d: int) -> bool:
        return self.roles[d >> 1][0] == "a"

    @property
    def positions(self) -> Dict[int, int]:
        if self._pos is None:
            self._pos = {d: i for r in self.rotation.values() for i, d in enumerate(r)}
        return self._pos

    def darts(self) -> List[int]:
        return sorted(d for e in self.alive for d in (2 * e, 2 * e + 1))

    def sigma(self, d: int) -> int:
        rot = self.rotation[self.origin(d)]
        return rot[(self.positions[d] + 1) % len(rot)]

    def offset(self, h: int, d: int) -> int:
        """Counterclockwise steps from half-edge h to half-edge d at their vertex."""
        rot = self.rotation[self.origin(h)]
        pos = self.positions
        return (pos[d] - pos[h]) % len(rot)

    def faces(self) -> List[List[int]]:
        seen: Set[int] = set()
        out = []
        for start in self.darts():
            if start in seen:
                continue
            face, d = [], start
            while d not in seen:
                seen.add(d)
                face.append(d)
                d = self.sigma(d ^ 1)
            out.append(face)
        return out


# ── Capped spine ──────────────────────────────────────────────────────────

class Spine:
    """
    Cap the disk faces of `graph` stage by stage, highest stage first.

    Disk faces are the faces that contain a-darts. At stage m, while a disk
    holds stage-m a-darts, one stage-m edge separating it from a different
    face is deleted (a-edges first, then lowest id). Only stage-m edges go at
    stage m, so edges tagged ≤ n still span stage n.
    """

    def __init__(self, graph: RibbonGraph):
        self.graph = graph.copy()
        self.substitution: Dict[int, Path] = {}
        self._expanded: Dict[int, Path] = {}
        self._cap()
        self._boundary = self.graph.faces()
        self._basis: Dict[int, int] = {}
        for face in self._boundary:
            self._insert(self.parity(face))

    def _cap(self):
        g = self.graph
        faces = g.faces()
        disk = {d for f in faces if any(g.is_a(x) for x in f) for d in f}
        stages = sorted({g.stage(2 * e) for e in g.alive if g.is_a(2 * e)}, reverse=True)
        for m in stages:
            while True:
                faces = g.faces()
                face_of = {d: i for i, f in enumerate(faces) for d in f}
                pending = [
                    f for f in faces
                    if f[0] in disk and any(g.is_a(d) and g.stage(d) == m for d in f)
                ]
                if not pending:
                    break
                face = pending[0]
                here = face_of[face[0]]
                candidates = [d for d in face if g.stage(d) == m and face_of[d ^ 1] != here]
                if not candidates:
                    raise ConstructionError(f"stage {m}: disk face has no removable edge")
                d = min(candidates, key=lambda x: (not g.is_a(x), x >> 1, x))
                other = faces[face_of[d ^ 1]]
                i = face.index(d)
                rest = face[i + 1:] + face[:i]
                self.substitution[d] = reverse(rest)
                self.substitution[d ^ 1] = tuple(rest)
                if other[0] not in disk:
                    disk.difference_update(face)
                disk.discard(d)
                disk.discard(d ^ 1)
                g.delete_edge(d >> 1)
                logger.debug(f"capped stage {m}: removed edge {g.roles[d >> 1]}")
        if disk:
            raise ConstructionError(f"{len(disk)} darts still bound disk faces after capping")

    # ── Expansion ─────────────────────────────────────────────────────────

    def _expand_dart(self, d: int) -> Path:
        if d not in self.substitution:
            return (d,)
        if d not in self._expanded:
            out: List[int] = []
            for x in self.substitution[d]:
                out.extend(self._expand_dart(x))
            self._expanded[d] = tuple(reduce_path(out))
        return self._expanded[d]

    def expand(self, darts: Iterable[int]) -> Path:
        """Closed uncapped path -> canonical closed path on the spine."""
        out: List[int] = []
        for d in darts:
            out.extend(self._expand_dart(d))
        return canonical(out)

    def stage_of(self, path: Path) -> int:
        return max((self.graph.stage(d) for d in path), default=0)

    def guard(self, path: Sequence[int], context: str):
        if len(path) > settings.MAX_PATH_LENGTH:
            raise UnsupportedError(
                f"{context}: path length {len(path)} exceeds MAX_PATH_LENGTH={settings.MAX_PATH_LENGTH}"
            )

    # ── Intersection (linked pairs) ───────────────────────────────────────

    def _visits(self, path: Path) -> List[Tuple[int, int, int]]:
        return [(self.graph.origin(path[i]), path[i - 1] ^ 1, path[i]) for i in range(len(path))]

    def _interleaved(self, a: int, o: int, b: int, u: int) -> bool:
        span = self.graph.offset(a, o)
        inside = lambda x: 0 < self.graph.offset(a, x) < span
        return inside(b) != inside(u)

    def _transverse(self, p: Path, q: Path, same: bool) -> int:
        by_vertex = defaultdict(list)
        for j, (v, b, u) in enumerate(self._visits(q)):
            by_vertex[v].append((j, b, u))
        count = 0
        for i, (v, a, o) in enumerate(self._visits(p)):
            for j, b, u in by_vertex.get(v, ()):
                if same and j <= i:
                    continue
                if len({a, o, b, u}) < 4:
                    continue
                if self._interleaved(a, o, b, u):
                    count += 1
        return count

    def _segments(self, p: Path, q: Path) -> int:
        """Maximal common runs of p with q, counted when the ends are linked."""
        off = self.graph.offset
        count = 0
        n1, n2 = len(p), len(q)
        index = defaultdict(list)
        for j, d in enumerate(q):
            index[d].append(j)
        for i, d in enumerate(p):
            for j in index.get(d, ()):
                if p[i - 1] == q[j - 1]:
                    continue
                run = 1
                while run < n1 + n2 and p[(i + run) % n1] == q[(j + run) % n2]:
                    run += 1
                if run >= n1 + n2:
                    continue  # parallel
                s = p[i]
                right_start = off(s, p[i - 1] ^ 1) > off(s, q[j - 1] ^ 1)
                h = p[(i + run - 1) % n1] ^ 1
                right_end = off(h, p[(i + run) % n1]) < off(h, q[(j + run) % n2])
                if right_start != right_end:
                    count += 1
        return count

    def intersection(self, p: Path, q: Path) -> int:
        if canonical(p) == canonical(q):
            return 0
        return self._transverse(p, q, same=False) + self._segments(p, q) + self._segments(p, reverse(q))

    def self_intersection(self, p: Path) -> int:
        linked = self._segments(p, p) + self._segments(p, reverse(p))
        return self._transverse(p, p, same=True) + linked // 2

    # ── Dehn twists (band realization) ────────────────────────────────────

    def _compare(self, s1: Tuple[Path, int], s2: Tuple[Path, int]) -> int:
        seq1, i1 = s1
        seq2, i2 = s2
        n1, n2 = len(seq1), len(seq2)
        for step in range(1, n1 + n2 + 1):
            d1, d2 = seq1[(i1 + step) % n1], seq2[(i2 + step) % n2]
            if d1 != d2:
                h = seq1[(i1 + step - 1) % n1] ^ 1
                return -1 if self.graph.offset(h, d1) < self.graph.offset(h, d2) else 1
        return 0

    def _band_ranks(self, curves: List[Path]) -> Tuple[Dict[Tuple[int, int], int], Dict[int, int]]:
        """Rank of every strand (curve, position) on its edge, right to left along the even dart."""
        bands = defaultdict(list)
        for ci, path in enumerate(curves):
            back = reverse(path)
            n = len(path)
            for i, d in enumerate(path):
                strand = (path, i) if d % 2 == 0 else (back, n - 1 - i)
                bands[d >> 1].append((strand, (ci, i)))
        key = cmp_to_key(lambda x, y: self._compare(x[0], y[0]))
        ranks, sizes = {}, {}
        for e, strands in bands.items():
            strands.sort(key=key)
            sizes[e] = len(strands)
            for r, (_, tag) in enumerate(strands):
                ranks[tag] = r
        return ranks, sizes

    def twist(self, gamma: Path, c: Path, power: int) -> Path:
        """t_c^power(gamma). At each crossing gamma turns left onto c (right for negative powers)."""
        if power == 0 or canonical(gamma) == canonical(c):
            return canonical(gamma)
        g = self.graph
        ranks, sizes = self._band_ranks([gamma, c])
        width = max(sizes.values()) + 1

        def point(ci: int, i: int, half: int) -> Tuple[int, int]:
            r = ranks[(ci, i)]
            n = sizes[half >> 1]
            ccw = r if half % 2 == 0 else n - 1 - r
            return g.origin(half), g.positions[half] * width + ccw

        def chords(ci: int, path: Path):
            n = len(path)
            for i in range(n):
                v, p_in = point(ci, (i - 1) % n, path[i - 1] ^ 1)
                _, p_out = point(ci, i, path[i])
                yield i, v, p_in, p_out

        c_at = defaultdict(list)
        for l, v, q_in, q_out in chords(1, c):
            c_at[v].append((l, q_in, q_out))

        n_c = len(c)
        forward = lambda l: [c[(l + t) % n_c] for t in range(n_c)]
        backward = lambda l: [c[(l - 1 - t) % n_c] ^ 1 for t in range(n_c)]

        out: List[int] = []
        for i, v, p_in, p_out in chords(0, gamma):
            circle = len(g.rotation[v]) * width
            span = (p_out - p_in) % circle
            crossings = []
            for l, q_in, q_out in c_at.get(v, ()):
                in_right = 0 < (q_in - p_in) % circle < span
                out_right = 0 < (q_out - p_in) % circle < span
                if in_right == out_right:
                    continue
                right = q_in if in_right else q_out
                # left twists leave toward the endpoint on gamma's left
                leave_out = in_right if power > 0 else out_right
                loop = forward(l) if leave_out else backward(l)
                crossings.append(((right - p_in) % circle, loop))
            crossings.sort(key=lambda x: x[0])
            for _, loop in crossings:
                out.extend(loop * abs(power))
            out.append(gamma[i])
            self.guard(out, "twist")
        return canonical(out)

    # ── Homology mod 2 ────────────────────────────────────────────────────

    @staticmethod
    def parity(path: Iterable[int]) -> int:
        v = 0
        for d in path:
            v ^= 1 << (d >> 1)
        return v

    def _reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            if top not in self._basis:
                return v
            v ^= self._basis[top]
        return 0

    def _insert(self, v: int):
        v = self._reduce(v)
        if v:
            self._basis[v.bit_length() - 1] = v

    def homologous(self, path: Path, others: Iterable[Path]) -> bool:
        """Is [path] the sum of [others] in H1(Σ, ∂Σ; Z/2)?"""
        v = self.parity(path)
        for q in others:
            v ^= self.parity(q)
        return self._reduce(v) == 0

    def is_separating(self, path: Path) -> bool:
        """Zero in H1(Σ, ∂Σ; Z/2): the parity vector lies in the span of boundary faces."""
        return self._reduce(self.parity(path)) == 0

    @property
    def boundary_faces(self) -> List[List[int]]:
        return self._boundary
