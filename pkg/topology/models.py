"""
topology/models.py  –  All Pydantic schemas used throughout surfacekit.

Every value is immutable after construction (frozen models), so blueprints,
exhaustions, curves and words can be cached and shared across stages.
"""

from typing import Dict, List, Literal, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, model_validator

PieceKind = Literal["F1", "F2", "F3"]
Color = Literal["blue", "red", "extra", "boundary"]


class Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


# ── Surface ───────────────────────────────────────────────────────────────

class BlueprintVertex(Frozen):
    index: int
    address: str = Field(description="Base-two heap address, root is '1'")
    parent: Optional[int] = None
    valence: int = Field(description="Intended valence, kept at the frontier")


class TreeBlueprint(Frozen):
    family: str
    depth: int
    vertices: Tuple[BlueprintVertex, ...]

    @property
    def root(self) -> int:
        return 0

    def children(self, index: int) -> List[int]:
        return [v.index for v in self.vertices if v.parent == index]

    def by_address(self) -> Dict[str, int]:
        return {v.address: v.index for v in self.vertices}


class TemplateCurve(Frozen):
    role: str = Field(description="'red' or 'blue{j}'")
    color: Color


class TemplatePiece(Frozen):
    kind: PieceKind
    labels: Tuple[str, ...]
    curves: Tuple[TemplateCurve, ...]
    intersections: Tuple[Tuple[str, str, int], ...]
    complement: Tuple[Tuple[str, str], ...] = Field(
        description="(region kind, what it surrounds) for the full star chain"
    )
    pants: Tuple[Tuple[str, str, str], ...] = Field(
        description="Pants cut out by the blue curves, as cuff triples"
    )


class Piece(Frozen):
    position: int
    kind: PieceKind
    parent: Optional[int] = None
    slot: Optional[int] = Field(default=None, description="Parent label index b{slot} this piece glues to")

    @property
    def blues(self) -> int:
        return {"F1": 1, "F2": 2, "F3": 3}[self.kind]


class Exhaustion(Frozen):
    blueprint: TreeBlueprint
    stages: int
    pieces: Tuple[Piece, ...]
    gluing: Tuple[Tuple[str, str], ...] = Field(description="(parent label, child b0) pairs")
    relabel: Tuple[int, ...] = Field(description="Position i holds blueprint vertex relabel[i], named v{relabel[i]}")
    boundaries: Tuple[Tuple[str, ...], ...] = Field(description="∂Σₙ labels for each stage n")
    genus: Tuple[int, ...]

    def vertex_name(self, position: int) -> str:
        return f"v{self.relabel[position]}"

    def position_of(self, label: int) -> int:
        try:
            return self.relabel.index(label)
        except ValueError:
            raise KeyError(label) from None


class EndInvolution(Frozen):
    pivot: int
    roots: Tuple[int, int]
    mapping: Tuple[int, ...] = Field(description="Vertex permutation, index -> image")
    order_two: bool

    def __call__(self, index: int) -> int:
        return self.mapping[index]


# ── Curves ────────────────────────────────────────────────────────────────

class Curve(Frozen):
    kind: Literal["named", "coords", "carried"]
    name: Optional[str] = None
    coords: Tuple[Tuple[str, int, int], ...] = ()
    path: Tuple[int, ...] = ()
    ancestor: Optional[str] = None
    separating: Optional[bool] = None

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "named" and not self.name:
            raise ValueError("named curve needs a name")
        if self.kind == "carried" and not self.path:
            raise ValueError("carried curve needs a nonempty path")
        if self.kind == "coords":
            names = [c[0] for c in self.coords]
            if names != sorted(set(names)):
                raise ValueError("coordinates must be sorted with unique pants curves")
            for gamma, m, t in self.coords:
                if m < 0:
                    raise ValueError(f"m_{gamma} must be nonnegative")
                if m == 0 and t < 0:
                    raise ValueError(f"m_{gamma} = 0 requires t_{gamma} >= 0")
                if m == 0 and t == 0:
                    raise ValueError(f"empty coordinate for {gamma}")
        return self

    @classmethod
    def named(cls, name: str) -> "Curve":
        return cls(kind="named", name=name)

    @classmethod
    def coord(cls, mapping: Dict[str, Tuple[int, int]]) -> "Curve":
        entries = tuple(sorted((g, m, t) for g, (m, t) in mapping.items() if (m, t) != (0, 0)))
        return cls(kind="coords", coords=entries)

    @classmethod
    def carried(cls, path: Tuple[int, ...], ancestor: Optional[str] = None) -> "Curve":
        return cls(kind="carried", path=tuple(path), ancestor=ancestor)

    @property
    def key(self) -> tuple:
        if self.kind == "named":
            return ("named", self.name)
        if self.kind == "coords":
            return ("coords", self.coords)
        return ("carried", self.path)

    @property
    def label(self) -> str:
        if self.kind == "named":
            return self.name
        if self.kind == "coords":
            return "{" + ", ".join(f"{g}:({m},{t})" for g, m, t in self.coords) + "}"
        root = self.ancestor or "curve"
        return f"{root}′[{len(self.path)}]"

    def coord_map(self) -> Dict[str, Tuple[int, int]]:
        return {g: (m, t) for g, m, t in self.coords}

    def to_json_obj(self) -> dict:
        if self.kind == "named":
            return {"named": self.name}
        if self.kind == "coords":
            return {"coords": {g: [m, t] for g, m, t in self.coords}}
        return {"carried": list(self.path), "ancestor": self.ancestor}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Curve":
        if "named" in obj:
            return cls.named(obj["named"])
        if "coords" in obj:
            return cls.coord({g: (int(v[0]), int(v[1])) for g, v in obj["coords"].items()})
        if "carried" in obj:
            return cls.carried(tuple(obj["carried"]), obj.get("ancestor"))
        raise ValueError(f"unrecognised curve object: {obj}")


class Letter(Frozen):
    curve: Curve
    power: int

    @model_validator(mode="after")
    def _nonzero(self):
        if self.power == 0:
            raise ValueError("zero exponents are dropped, not stored")
        return self


class MappingClass(Frozen):
    word: Tuple[Letter, ...] = ()

    @classmethod
    def of(cls, *letters) -> "MappingClass":
        """Accepts Letters or (curve, power) pairs; curves may be names."""
        stack: List[Tuple[Curve, int]] = []
        for item in letters:
            if isinstance(item, Letter):
                curve, power = item.curve, item.power
            else:
                curve, power = item
            if isinstance(curve, str):
                curve = Curve.named(curve)
            if power == 0:
                continue
            if stack and stack[-1][0].key == curve.key:
                merged = stack[-1][1] + power
                stack.pop()
                if merged:
                    stack.append((curve, merged))
            else:
                stack.append((curve, power))
        return cls(word=tuple(Letter(curve=c, power=k) for c, k in stack))

    @classmethod
    def twist(cls, curve, power: int = 1) -> "MappingClass":
        return cls.of((curve, power))

    @classmethod
    def identity(cls) -> "MappingClass":
        return cls()

    def inverse(self) -> "MappingClass":
        return MappingClass.of(*[(l.curve, -l.power) for l in reversed(self.word)])

    def __mul__(self, other: "MappingClass") -> "MappingClass":
        return MappingClass.of(*self.word, *other.word)

    def __pow__(self, k: int) -> "MappingClass":
        base = self if k >= 0 else self.inverse()
        out = MappingClass.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    @property
    def is_identity(self) -> bool:
        return not self.word

    def curves(self) -> List[Curve]:
        seen, out = set(), []
        for letter in self.word:
            if letter.curve.key not in seen:
                seen.add(letter.curve.key)
                out.append(letter.curve)
        return out

    def to_word_json(self) -> list:
        return [[l.curve.name if l.curve.kind == "named" else l.curve.to_json_obj(), l.power]
                for l in self.word]

    @classmethod
    def from_word_json(cls, word: list) -> "MappingClass":
        letters = []
        for curve, power in word:
            c = Curve.named(curve) if isinstance(curve, str) else Curve.from_json_obj(curve)
            letters.append((c, int(power)))
        return cls.of(*letters)


# ── Windows ───────────────────────────────────────────────────────────────

class Window(Frozen):
    kind: Literal["torus", "four_holed"]
    core: str
    transversal: str
    cuffs: Tuple[str, ...]
    stage: int


class LanternWindow(Frozen):
    boundary: Tuple[Curve, Curve, Curve, Curve]
    interior: Tuple[Curve, Curve, Curve]
    stage: int


# ── Verdicts ──────────────────────────────────────────────────────────────

class LocallyFiniteUpTo(Frozen):
    verdict: Literal["locally_finite"] = "locally_finite"
    stage: int
    consumed: int
    left_stage: bool = Field(description="False when the budget ran out without a certificate")


class ViolationCertificate(Frozen):
    verdict: Literal["violation"] = "violation"
    stage: int
    probe: Curve
    hits: Tuple[int, ...] = Field(description="Stream indices meeting the probe")


class DivergenceWitness(Frozen):
    index: int
    letter: Letter
    auxiliary: Curve
    value: int = Field(description="i(F_m(c), b_m)")
    bound: int = Field(description="|k| i(a,c) i(a,b) - i(c,b)")


class DivergenceCertificate(Frozen):
    verdict: Literal["divergent"] = "divergent"
    violation: ViolationCertificate
    witnesses: Tuple[DivergenceWitness, ...]


class NotFound(Frozen):
    reason: str


class BraidWitness(Frozen):
    common: MappingClass
    pairs: Tuple[Tuple[Curve, Curve], ...] = ()
    signs: Tuple[int, ...] = ()


# ── Chains ────────────────────────────────────────────────────────────────

class ChainCurve(Frozen):
    name: str
    color: Color
    stage: int


class Chain(Frozen):
    curves: Tuple[ChainCurve, ...]
    intersections: Tuple[Tuple[str, str, int], ...] = Field(description="Nonzero pairs only")
    exhaustion: Exhaustion
    horizon: int

    @property
    def names(self) -> List[str]:
        return [c.name for c in self.curves]

    def restrict(self, n: int) -> "Chain":
        keep = {c.name for c in self.curves if c.stage <= n}
        return Chain(
            curves=tuple(c for c in self.curves if c.name in keep),
            intersections=tuple(t for t in self.intersections if t[0] in keep and t[1] in keep),
            exhaustion=self.exhaustion,
            horizon=min(n, self.horizon),
        )

    def value(self, a: str, b: str) -> int:
        for x, y, v in self.intersections:
            if {x, y} == {a, b}:
                return v
        return 0


class TreeCertificate(Frozen):
    tree_like: bool
    spanning: Tuple[Tuple[str, str], ...] = ()
    cycle: Tuple[str, ...] = ()
    components: int = 1


class FillingCertificate(Frozen):
    filling: bool
    regions: Tuple[str, ...] = Field(default=(), description="Offending non-disk regions")


class ChainBijection(Frozen):
    pairs: Tuple[Tuple[str, str], ...]

    def as_dict(self) -> Dict[str, str]:
        return dict(self.pairs)

    def inverse(self) -> "ChainBijection":
        return ChainBijection(pairs=tuple((b, a) for a, b in self.pairs))


class NotIsomorphic(Frozen):
    invariant: str


class StageMap(Frozen):
    domain: Exhaustion
    codomain: Exhaustion
    stage: int
    piece_map: Tuple[Tuple[int, int], ...] = Field(description="Domain blueprint vertex -> codomain blueprint vertex")
    flip: bool = Field(default=False, description="The root blue loop is carried with reversed direction")

    def as_dict(self) -> Dict[int, int]:
        return dict(self.piece_map)

    def positions(self) -> Dict[int, int]:
        """Domain position -> codomain position."""
        return {
            self.domain.position_of(a): self.codomain.position_of(b)
            for a, b in self.piece_map
        }


class Failure(Frozen):
    stage: Optional[int] = None
    reason: str
    witness: Optional[str] = None


# ── Homomorphisms ─────────────────────────────────────────────────────────

class HomomorphismTable(Frozen):
    domain: Exhaustion
    codomain: Exhaustion
    horizon: int
    images: Tuple[Tuple[str, MappingClass], ...]
    description: str = ""

    def image(self, generator: str) -> MappingClass:
        for name, word in self.images:
            if name == generator:
                return word
        raise KeyError(f"table has no entry for generator {generator!r}")

    @property
    def generators(self) -> List[str]:
        return [name for name, _ in self.images]

    def to_table_json(self) -> dict:
        return {name: word.to_word_json() for name, word in self.images}


class GateVerdict(Frozen):
    gate: str
    passed: bool
    detail: str = ""
    witness: Optional[str] = None
    certificate: Optional[DivergenceCertificate] = None


class PipelineReport(Frozen):
    stage: int
    verdicts: Tuple[GateVerdict, ...]
    passed: bool
    homeomorphism: Optional[StageMap] = None
    hypotheses: Tuple[str, ...] = ()
    duration_seconds: float = 0.0

    @property
    def failed_gate(self) -> Optional[str]:
        for v in self.verdicts:
            if not v.passed:
                return v.gate
        return None


# ── Suites ────────────────────────────────────────────────────────────────

class SuiteConfig(Frozen):
    name: str
    stages: int = Field(ge=0)
    seed: int = 7
    budget: int = Field(default=400, ge=0, description="0 = exhaustive")
    output: Optional[str] = None


class CaseResult(Frozen):
    case_id: str
    passed: bool
    detail: str = ""


class SuiteReport(Frozen):
    name: str
    stages: int
    seed: int
    cases: Tuple[CaseResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> List[CaseResult]:
        return [c for c in self.cases if not c.passed]
