"""
topology/twists.py  –  Mapping classes acting on curves, equality on stage
markings, relation checkers, infinite products and the stage-wise twist
decomposition of coherent families.

Words act right to left: the leftmost letter acts last.
"""

from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger

from config.settings import settings
from topology.curves import (
    CurveLike,
    CurveStream,
    as_curve,
    avoids_window,
    consume,
    curve_stage,
    intersection,
    is_locally_finite,
    is_separating,
    on_spine,
    resolve,
    same_curve,
    to_coords,
)
from topology.errors import (
    ConstructionError,
    IncoherentFamilyError,
    StageError,
    UnsupportedError,
)
from topology.models import (
    BraidWitness,
    Curve,
    DivergenceCertificate,
    DivergenceWitness,
    LanternWindow,
    Letter,
    LocallyFiniteUpTo,
    MappingClass,
    NotFound,
    ViolationCertificate,
)
from topology.realize import SurfaceModel
from topology.windows import coord_of, pants_twist, single_window, slope_of, window_twist


def stage_of(f: MappingClass, model: SurfaceModel) -> int:
    return max((curve_stage(l.curve, model) for l in f.word), default=0)


# ── Action on curves ──────────────────────────────────────────────────────

def _spine_twist(a: Curve, k: int, c: Curve, model: SurfaceModel) -> Curve:
    path, axis = resolve(c, model), resolve(a, model)
    key = (path, axis, k)
    if key not in model.twist_cache:
        model.twist_cache[key] = model.spine.twist(path, axis, k)
    image = model.twist_cache[key]
    if image == path:
        return c
    return Curve.carried(image, ancestor=c.name if c.kind == "named" else c.ancestor)


def _twist_coords(a: Curve, k: int, c: Curve, model: SurfaceModel) -> Curve:
    if a.kind == "named":
        pants = model.pants_name(a.name)
        if pants is not None:
            entries = c.coord_map()
            if pants in entries:
                entries[pants] = pants_twist(*entries[pants], k)
            return Curve.coord(entries)

    window = single_window(model, c)
    if window is None:
        raise UnsupportedError(f"t_{a.label} on {c.label}: curve spans several windows", letter=a.label)
    axis = to_coords(a, model, window)
    if axis is not None and single_window(model, axis) == window:
        (core, m, t), = c.coords
        (_, am, at), = axis.coords
        image = window_twist(slope_of((am, at), window), slope_of((m, t), window), k, window)
        return Curve.coord({core: coord_of(image, window)})
    if on_spine(a) and avoids_window(a, model, window):
        return c
    raise UnsupportedError(f"t_{a.label} is outside the twist alphabet for {c.label}", letter=a.label)


def _apply_letter(letter: Letter, c: Curve, model: SurfaceModel) -> Curve:
    a, k = letter.curve, letter.power
    if on_spine(a) and on_spine(c):
        return _spine_twist(a, k, c, model)
    if c.kind == "coords":
        return _twist_coords(a, k, c, model)
    # coordinate letter acting on a spine curve
    window = single_window(model, a)
    if window is None:
        raise UnsupportedError(f"t_{a.label} spans several windows", letter=a.label)
    if avoids_window(c, model, window):
        return c
    converted = to_coords(c, model, window)
    if converted is None:
        raise UnsupportedError(f"t_{a.label} on {c.label}: no window form", letter=a.label)
    return _twist_coords(a, k, converted, model)


def apply(f: MappingClass, c: CurveLike, model: SurfaceModel) -> Curve:
    c = as_curve(c)
    for letter in reversed(f.word):
        c = _apply_letter(letter, c, model)
    return c


def multitwist(pairs: Sequence[Tuple[CurveLike, int]], model: SurfaceModel) -> MappingClass:
    curves = [as_curve(c) for c, _ in pairs]
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            if intersection(curves[i], curves[j], model):
                raise ValueError(f"{curves[i].label} and {curves[j].label} meet; not a multitwist")
    return MappingClass.of(*[(c, k) for c, (_, k) in zip(curves, pairs)])


# ── Equality on markings ──────────────────────────────────────────────────

def agree_on(
    f: MappingClass, g: MappingClass, curves: Sequence[Curve], model: SurfaceModel
) -> Optional[Curve]:
    """First curve on which f and g disagree, or None."""
    for m in curves:
        if not same_curve(apply(f, m, model), apply(g, m, model), model):
            return m
    return None


def equal_mc(f: MappingClass, g: MappingClass, n: int, model: SurfaceModel) -> bool:
    if n < 2:
        raise StageError(f"equal_mc needs n >= 2 (genus >= 3), got {n}", stage=n)
    if n + 1 > model.horizon:
        raise StageError(f"equal_mc at stage {n} needs horizon >= {n + 1}, model has {model.horizon}", stage=n)
    support = max(stage_of(f, model), stage_of(g, model))
    if support > n:
        raise StageError(f"words reach stage {support} beyond n={n}", stage=n)
    return agree_on(f, g, model.marking(n), model) is None


def commutes(ta: MappingClass, tb: MappingClass, n: int, model: SurfaceModel) -> bool:
    return equal_mc(ta * tb, tb * ta, n, model)


def braided(t1: MappingClass, t2: MappingClass, n: int, model: SurfaceModel) -> bool:
    return equal_mc(t1 * t2 * t1, t2 * t1 * t2, n, model)


# ── Braided decompositions ────────────────────────────────────────────────

def braided_decomposition_verify(
    t1: MappingClass, t2: MappingClass, witness: BraidWitness, n: int, model: SurfaceModel
) -> bool:
    pairs, signs = witness.pairs, witness.signs
    if len(pairs) != len(signs) or any(s not in (1, -1) for s in signs):
        return False
    for a, b in pairs:
        for x in (a, b):
            if not same_curve(apply(witness.common, x, model), x, model):
                return False
    for i, (a, _) in enumerate(pairs):
        for j, (_, b) in enumerate(pairs):
            if intersection(a, b, model) != (1 if i == j else 0):
                return False
    lhs1 = witness.common * MappingClass.of(*[(a, s) for (a, _), s in zip(pairs, signs)])
    lhs2 = witness.common * MappingClass.of(*[(b, s) for (_, b), s in zip(pairs, signs)])
    return equal_mc(t1, lhs1, n, model) and equal_mc(t2, lhs2, n, model)


def _letters(t: MappingClass, model: SurfaceModel) -> Dict[tuple, Letter]:
    return {resolve(l.curve, model): l for l in t.word}


def braided_decomposition_search(
    t1: MappingClass, t2: MappingClass, n: int, model: SurfaceModel, budget: Optional[int] = None
) -> Union[BraidWitness, NotFound]:
    """Common sub-multitwists first (largest first), then signs, then Kronecker pairings."""
    budget = settings.SEARCH_BUDGET if budget is None else budget
    first, second = _letters(t1, model), _letters(t2, model)
    common = [k for k, l in first.items() if k in second and second[k].power == l.power]
    tried = 0
    for size in range(len(common), -1, -1):
        for shared in combinations(common, size):
            rest1 = [l for k, l in first.items() if k not in shared]
            rest2 = [l for k, l in second.items() if k not in shared]
            if len(rest1) != len(rest2):
                continue
            if any(abs(l.power) != 1 for l in rest1 + rest2):
                continue
            signs = tuple(l.power for l in rest1)
            for order in permutations(rest2):
                tried += 1
                if tried > budget:
                    logger.warning(f"braided decomposition search hit its budget of {budget}")
                    return NotFound(reason=f"budget {budget} exhausted")
                if any(b.power != s for b, s in zip(order, signs)):
                    continue
                witness = BraidWitness(
                    common=MappingClass.of(*[first[k] for k in shared]),
                    pairs=tuple((a.curve, b.curve) for a, b in zip(rest1, order)),
                    signs=signs,
                )
                if braided_decomposition_verify(t1, t2, witness, n, model):
                    return witness
    return NotFound(reason="no common part and Kronecker pairing reproduces both multitwists")


# ── Infinite products ─────────────────────────────────────────────────────

def _auxiliary(a: Curve, probe: Curve, candidates: List[Curve], model: SurfaceModel) -> Curve:
    """A curve missing the probe but meeting a; the probe itself always qualifies."""
    for b in candidates:
        try:
            if intersection(probe, b, model) == 0 and intersection(a, b, model) > 0:
                return b
        except UnsupportedError:
            continue
    return probe


def divergence_certificate(
    stream: CurveStream,
    violation: ViolationCertificate,
    model: SurfaceModel,
    limit: Optional[int] = None,
    budget: Optional[int] = None,
) -> DivergenceCertificate:
    limit = settings.WITNESS_LIMIT if limit is None else limit
    taken, _ = consume(stream, violation.stage, model, budget)
    probe = violation.probe
    candidates = model.probe_curves(violation.stage)
    witnesses = []
    for index in violation.hits[:limit]:
        letter = taken[index]
        a, k = letter.curve, letter.power
        b = _auxiliary(a, probe, candidates, model)
        image = apply(MappingClass.twist(a, k), probe, model)
        witnesses.append(DivergenceWitness(
            index=index,
            letter=letter,
            auxiliary=b,
            value=intersection(image, b, model),
            bound=abs(k) * intersection(a, probe, model) * intersection(a, b, model)
            - intersection(probe, b, model),
        ))
    return DivergenceCertificate(violation=violation, witnesses=tuple(witnesses))


def infinite_product(
    stream: CurveStream, c: CurveLike, N: int, model: SurfaceModel
) -> Union[Curve, DivergenceCertificate]:
    c = as_curve(c)
    verdict = is_locally_finite(stream, c, N, model)
    if isinstance(verdict, ViolationCertificate):
        return divergence_certificate(stream, verdict, model)
    letters, _ = consume(stream, model.horizon, model)
    logger.debug(f"{stream.name}: evaluating {len(letters)} letters on {c.label}")
    return apply(MappingClass.of(*letters), c, model)


# ── Lantern relation ──────────────────────────────────────────────────────

def lantern_window(model: SurfaceModel, c: int) -> LanternWindow:
    """Template four-holed sphere around the gluing circle of piece c."""
    ex = model.exhaustion
    if not 0 < c <= ex.stages or ex.pieces[c].parent == 0:
        raise ConstructionError(f"piece {c} has no four-holed window (root child or outside stages)")
    window = model.window_of(model.name(c, "b0"))
    w, a = Curve.named(window.core), Curve.named(window.transversal)
    cuffs = [Curve.named(n) for n in window.cuffs]
    spine = model.spine
    w_path, a_path = resolve(w, model), resolve(a, model)
    cuff_paths = [resolve(x, model) for x in cuffs]

    def fits(path) -> bool:
        return (
            bool(path)
            and spine.self_intersection(path) == 0
            and spine.intersection(path, w_path) == 2
            and spine.intersection(path, a_path) == 2
            and all(spine.intersection(path, x) == 0 for x in cuff_paths)
        )

    survivors = []
    for loop in model.lantern_loops(c):
        path = spine.expand(loop)
        if path not in survivors and fits(path):
            survivors.append(path)
    logger.debug(f"lantern window {c}: {len(survivors)} candidate(s) for the third interior curve")

    for cand in survivors:
        for z in (cand, spine.twist(cand, a_path, 1), spine.twist(cand, a_path, -1)):
            if not fits(z):
                continue
            # t_w t_a t_z is central in the window iff t_w^{-1}(z) = t_a(z)
            if spine.twist(z, w_path, -1) == spine.twist(z, a_path, 1):
                return LanternWindow(
                    boundary=tuple(cuffs),
                    interior=(w, a, Curve.carried(z, ancestor=f"lantern{c}")),
                    stage=c,
                )
    raise ConstructionError(f"no lantern completion found around {window.core}")


def lantern_check(window: LanternWindow, model: SurfaceModel) -> bool:
    boundary, interior = window.boundary, window.interior
    for i in range(4):
        for j in range(i + 1, 4):
            if intersection(boundary[i], boundary[j], model):
                raise ConstructionError(f"cuffs {boundary[i].label} and {boundary[j].label} meet")
        for x in interior:
            if intersection(boundary[i], x, model):
                raise ConstructionError(f"cuff {boundary[i].label} meets interior curve {x.label}")
    t = [MappingClass.twist(x) for x in boundary + interior]
    lhs = t[0]
    rhs = t[4] * t[5] * t[6] * (t[1] * t[2] * t[3]).inverse()
    n = max(window.stage, 2)
    return equal_mc(lhs, rhs, n, model)


# ── Stage-wise decomposition ──────────────────────────────────────────────

def twist_product_decomposition(
    family: Sequence[MappingClass], N: int, model: SurfaceModel
) -> Tuple[Letter, ...]:
    """
    Emit non-separating twists t_1, t_2, … stage by stage. After stage n the
    emitted product equals f⁽ⁿ⁾; each f⁽ⁿ⁾ must agree with f⁽ⁿ⁻¹⁾ on the
    curves inside Σₙ₋₁.
    """
    if len(family) < N + 1:
        raise ValueError(f"family has {len(family)} stages, need {N + 1}")
    emitted: List[Letter] = []
    for n in range(N + 1):
        current = family[n]
        if n > 0:
            moved = agree_on(current, family[n - 1], model.inner_marking(n - 1), model)
            if moved is not None:
                raise IncoherentFamilyError(
                    f"f({n}) and f({n - 1}) disagree on {moved.label} inside Σ{n - 1}", stage=n
                )
        rest = MappingClass.of(*emitted).inverse() * current
        for letter in rest.word:
            if is_separating(letter.curve, model):
                raise UnsupportedError(f"separating letter {letter.curve.label}", letter=letter.curve.label)
            sign = 1 if letter.power > 0 else -1
            emitted.extend(Letter(curve=letter.curve, power=sign) for _ in range(abs(letter.power)))
        logger.debug(f"stage {n}: {len(emitted)} twists emitted")
    return tuple(emitted)
