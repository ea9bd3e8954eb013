"""
topology/curves.py  –  Curve resolution, intersection numbers, separation and
local finiteness of curve streams.

Named and carried curves are exact through the spine. Coord curves are exact
against pants curves, inside one elementary window, and against named curves
that avoid that window; every other Coord configuration is Unsupported.
"""

from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Union

from loguru import logger

from config.settings import settings
from topology.errors import UnresolvedCurveError, UnsupportedError
from topology.models import Curve, Exhaustion, Letter, LocallyFiniteUpTo, ViolationCertificate
from topology.realize import SurfaceModel
from topology.spine import Path, canonical
from topology.windows import single_window, slope_of, window_coords, window_intersection

CurveLike = Union[Curve, str]


def as_curve(c: CurveLike) -> Curve:
    return Curve.named(c) if isinstance(c, str) else c


# ── Resolution ────────────────────────────────────────────────────────────

def resolve(c: CurveLike, model: SurfaceModel) -> Path:
    """Canonical spine path of a named or carried curve."""
    c = as_curve(c)
    if c.kind == "named":
        return model.path(c.name)
    if c.kind == "carried":
        return canonical(c.path)
    raise UnsupportedError(f"coordinate curve {c.label} has no spine path", pair=(c.label, ""))


def on_spine(c: Curve) -> bool:
    return c.kind in ("named", "carried")


def to_coords(c: Curve, model: SurfaceModel, window) -> Optional[Curve]:
    if c.kind == "coords":
        return c
    if c.kind == "named":
        return window_coords(model, c.name, window)
    path = resolve(c, model)
    for name in (window.core, window.transversal):
        if model.path(name) == path:
            return window_coords(model, name, window)
    return None


def avoids_window(c: Curve, model: SurfaceModel, window) -> bool:
    """A spine curve missing the window's core and transversal misses its interior."""
    path = resolve(c, model)
    return all(
        model.spine.intersection(path, model.path(name)) == 0
        for name in (window.core, window.transversal)
    )


def same_curve(a: CurveLike, b: CurveLike, model: SurfaceModel) -> bool:
    a, b = as_curve(a), as_curve(b)
    if on_spine(a) and on_spine(b):
        return resolve(a, model) == resolve(b, model)
    if a.kind == "coords" and b.kind == "coords":
        return a.coords == b.coords
    coord, other = (a, b) if a.kind == "coords" else (b, a)
    window = single_window(model, coord)
    if window is None:
        return False
    converted = to_coords(other, model, window)
    return converted is not None and converted.coords == coord.coords


def curve_stage(c: CurveLike, model: SurfaceModel) -> int:
    c = as_curve(c)
    if c.kind == "coords":
        return max(model.stage_of_name(g) for g, _, _ in c.coords)
    return model.spine.stage_of(resolve(c, model))


# ── Intersection ──────────────────────────────────────────────────────────

def _coord_intersection(coord: Curve, other: Curve, model: SurfaceModel) -> int:
    pair = (coord.label, other.label)
    if other.kind == "named":
        pants = model.pants_name(other.name)
        if pants is not None:
            return coord.coord_map().get(pants, (0, 0))[0]
    window = single_window(model, coord)
    if window is None:
        raise UnsupportedError(f"{coord.label} spans several windows", pair=pair)
    other_coords = to_coords(other, model, window)
    if other_coords is not None and single_window(model, other_coords) == window:
        (_, m1, t1), = coord.coords
        (_, m2, t2), = other_coords.coords
        return window_intersection(slope_of((m1, t1), window), slope_of((m2, t2), window), window)
    if on_spine(other) and avoids_window(other, model, window):
        return 0
    raise UnsupportedError(f"no exact rule for {pair[0]} against {pair[1]}", pair=pair)


def intersection(a: CurveLike, b: CurveLike, model: SurfaceModel) -> int:
    """Geometric intersection number i(a, b)."""
    a, b = as_curve(a), as_curve(b)
    if on_spine(a) and on_spine(b):
        return model.spine.intersection(resolve(a, model), resolve(b, model))
    if a.kind == "coords":
        return _coord_intersection(a, b, model)
    return _coord_intersection(b, a, model)


def is_separating(c: CurveLike, model: SurfaceModel) -> bool:
    c = as_curve(c)
    if c.separating is not None:
        return c.separating
    if c.kind == "coords":
        raise UnsupportedError(f"{c.label} has no template ancestry", pair=(c.label, ""))
    return model.spine.is_separating(resolve(c, model))


def is_multicurve(curves: Sequence[CurveLike], model: SurfaceModel) -> bool:
    curves = [as_curve(c) for c in curves]
    return all(
        intersection(curves[i], curves[j], model) == 0
        for i in range(len(curves))
        for j in range(i + 1, len(curves))
    )


# ── Streams ───────────────────────────────────────────────────────────────

class CurveStream:
    """Restartable stream of twist letters; `factory` returns a fresh iterator each time."""

    def __init__(self, factory: Callable[[], Iterable[Letter]], name: str = "stream"):
        self.factory = factory
        self.name = name

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.factory())

    def take(self, n: int) -> List[Letter]:
        out = []
        for letter in self:
            if len(out) >= n:
                break
            out.append(letter)
        return out

    @classmethod
    def of(cls, letters: Sequence[Letter], name: str = "finite") -> "CurveStream":
        frozen = tuple(letters)
        return cls(lambda: iter(frozen), name=name)

    def __repr__(self):
        return f"CurveStream({self.name})"


def consume(stream: CurveStream, N: int, model: SurfaceModel, budget: Optional[int] = None):
    """Read letters inside Σ_N. Returns (letters, left_stage)."""
    budget = settings.STREAM_BUDGET if budget is None else budget
    taken: List[Letter] = []
    for letter in stream:
        if len(taken) >= budget:
            return taken, False
        try:
            stage = curve_stage(letter.curve, model)
        except UnresolvedCurveError:
            return taken, True
        if stage > N:
            return taken, True
        taken.append(letter)
    return taken, False


def is_locally_finite(
    stream: CurveStream,
    probe: Optional[CurveLike],
    N: int,
    model: SurfaceModel,
    budget: Optional[int] = None,
) -> Union[LocallyFiniteUpTo, ViolationCertificate]:
    taken, left = consume(stream, N, model, budget)
    if left:
        return LocallyFiniteUpTo(stage=N, consumed=len(taken), left_stage=True)

    probes = ([as_curve(probe)] if probe is not None else []) + model.probe_curves(N)
    for candidate in probes:
        hits = tuple(i for i, letter in enumerate(taken) if intersection(letter.curve, candidate, model) > 0)
        if len(hits) >= 3:
            logger.info(f"{stream.name}: probe {candidate.label} met {len(hits)} times inside Σ{N}")
            return ViolationCertificate(stage=N, probe=candidate, hits=hits)
    logger.debug(f"{stream.name}: {len(taken)} letters read inside Σ{N} without a violation")
    return LocallyFiniteUpTo(stage=N, consumed=len(taken), left_stage=False)


# ── Standard chain streams ────────────────────────────────────────────────

def _roles(ex: Exhaustion, position: int, kind: str) -> List[str]:
    piece = ex.pieces[position]
    if kind == "a":
        return ["a"] if position > 0 else []
    if kind == "blues":
        return [f"blue{j}" for j in range(1, piece.blues + 1)]
    if kind == "last_blue":
        return [f"blue{piece.blues}"]
    if kind == "blue_and_a":
        return ["blue1"] + (["a"] if position > 0 else [])
    if kind == "red_then_blue":
        return ["red", "blue1"]
    return [kind]


def stage_stream(ex: Exhaustion, kind: str, power: int = 1, alternate: bool = False) -> CurveStream:
    """One block of chain twists per piece, in stage order; leaves every Σ_N."""

    def letters():
        for position in range(ex.stages + 1):
            k = -power if alternate and position % 2 else power
            for role in _roles(ex, position, kind):
                yield Letter(curve=Curve.named(f"{ex.vertex_name(position)}.{role}"), power=k)

    tag = f"{kind}^{power}" + ("±" if alternate else "")
    return CurveStream(letters, name=f"{ex.blueprint.family}:{tag}")


def chain_streams(ex: Exhaustion) -> List[CurveStream]:
    """Ten locally finite twist streams over the Alexander chain."""
    return [
        stage_stream(ex, "blue1"),
        stage_stream(ex, "blue1", -1),
        stage_stream(ex, "red"),
        stage_stream(ex, "red", 2),
        stage_stream(ex, "a"),
        stage_stream(ex, "blues"),
        stage_stream(ex, "blue_and_a"),
        stage_stream(ex, "red", alternate=True),
        stage_stream(ex, "last_blue"),
        stage_stream(ex, "red_then_blue", -1),
    ]
