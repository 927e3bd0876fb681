"""Construction recipes for the six fourfolds, table verification and the toric search.

A recipe names a base (a toric fan description or the degrees of a split
bundle over P^2) and an ordered list of blow-up centers. Toric bases are
evaluated through the fan pipeline, bundle bases through the bundle Chow ring
with the centers folded in by :func:`fano4.blowup.blowup_update`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .blowup import (
    FourfoldInvariants,
    SurfaceCenterData,
    blowup_update,
    bundle_invariants,
    center_data_complete_intersection,
    center_data_section,
    chi_anticanonical,
)
from .bundle import BundleRing
from .errors import DomainError, InconsistencyError, NotConstructibleError
from .fan import (
    Fan,
    product_fan,
    projective_space_fan,
    split_bundle_fan,
    star_subdivision,
    validate_fan,
)
from . import toric

__all__ = [
    "TABLE_1",
    "ConstructionRecipe",
    "InvariantReport",
    "Verdict",
    "SearchHit",
    "builtin_recipes",
    "get_recipe",
    "recipe_from_json",
    "build_fan",
    "toric_report",
    "evaluate_recipe",
    "verify_table",
    "search_d1",
    "identify",
]

# Rows of the classification table: every variety has rho = 5 and delta = 3.
# "chi_mK" is the h^0(-K) column, equal to chi(-K) on a Fano.
TABLE_1: dict[str, dict[str, int]] = {
    "K1": dict(b3=0, h22=6, h13=0, K4=364, K2c2=196, chi_mK=78, chiT=10, rho=5, delta=3),
    "K2": dict(b3=0, h22=6, h13=0, K4=354, K2c2=192, chi_mK=76, chiT=10, rho=5, delta=3),
    "K3": dict(b3=0, h22=6, h13=0, K4=334, K2c2=184, chi_mK=72, chiT=10, rho=5, delta=3),
    "K4": dict(b3=0, h22=6, h13=0, K4=324, K2c2=180, chi_mK=70, chiT=10, rho=5, delta=3),
    "ex1": dict(b3=0, h22=7, h13=0, K4=253, K2c2=166, chi_mK=57, chiT=3, rho=5, delta=3),
    "ex2": dict(b3=0, h22=13, h13=0, K4=250, K2c2=172, chi_mK=57, chiT=-6, rho=5, delta=3),
}

REPORT_FIELDS = ("K4", "K2c2", "chiO", "chi_mK", "rho", "b3", "h22", "h13", "chiT", "delta")


@dataclass(frozen=True)
class ConstructionRecipe:
    name: str
    base: Optional[dict]
    centers: tuple[dict, ...] = ()
    expected: Optional[dict] = None
    metadata: dict = field(default_factory=dict)

    @property
    def constructible(self) -> bool:
        return self.base is not None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "base": self.base, "centers": list(self.centers)}
        if self.expected is not None:
            out["expected"] = self.expected
        if self.metadata:
            out["metadata"] = self.metadata
        return out


def recipe_from_json(data: dict) -> ConstructionRecipe:
    try:
        name = str(data["name"])
    except KeyError as exc:
        raise DomainError("recipe needs a name") from exc
    return ConstructionRecipe(
        name=name,
        base=data.get("base"),
        centers=tuple(data.get("centers", ())),
        expected=data.get("expected"),
        metadata=dict(data.get("metadata", {})),
    )


@dataclass
class InvariantReport:
    """Invariant tuple of a constructed fourfold, with the pipeline behind each value."""

    name: str
    K4: int
    K2c2: int
    chiO: int
    chi_mK: int
    rho: int
    betti: tuple[int, ...]
    b3: int
    h22: int
    h13: int
    chiT: Optional[int] = None
    delta: Optional[int] = None
    fano: Optional[bool] = None
    provenance: dict[str, str] = field(default_factory=dict)
    steps: tuple[FourfoldInvariants, ...] = ()
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if chi_anticanonical(self.K4, self.K2c2, self.chiO) != self.chi_mK:
            raise InconsistencyError(f"report {self.name!r}: chi(-K) disagrees with Riemann-Roch")

    @property
    def tuple(self) -> tuple:
        return tuple(getattr(self, f) for f in REPORT_FIELDS) + (self.betti,)

    def get(self, key: str):
        if key in REPORT_FIELDS or key in ("betti", "fano"):
            return getattr(self, key)
        return None

    def to_json(self) -> dict:
        out = {f: getattr(self, f) for f in REPORT_FIELDS}
        out["name"] = self.name
        out["betti"] = list(self.betti)
        out["fano"] = self.fano
        out["provenance"] = dict(self.provenance)
        if self.steps:
            out["steps"] = [s.to_json() for s in self.steps]
        if self.metadata:
            out["metadata"] = self.metadata
        return out


@dataclass(frozen=True)
class Verdict:
    status: str  # "pass", "fail" or "partial"
    diffs: dict = field(default_factory=dict)
    missing: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def describe(self) -> str:
        parts = [self.status]
        if self.diffs:
            parts.append(", ".join(f"{k}: {a}!={b}" for k, (a, b) in self.diffs.items()))
        if self.missing:
            parts.append("not computed: " + ", ".join(self.missing))
        return "; ".join(parts)


def verify_table(report: InvariantReport, expected: dict) -> Verdict:
    """Compare a report against expected values, field by field, exactly.

    Any mismatch is a fail. Otherwise, an expected field the report does not
    compute (or does not know) makes the verdict partial, never pass.
    """
    diffs = {}
    missing = []
    for key, want in expected.items():
        got = report.get(key)
        if got is None:
            missing.append(key)
        elif (list(got) if isinstance(got, tuple) else got) != (
            list(want) if isinstance(want, (tuple, list)) else want
        ):
            diffs[key] = (got, want)
    if diffs:
        return Verdict("fail", diffs, tuple(missing))
    if missing:
        return Verdict("partial", {}, tuple(missing))
    return Verdict("pass")


# --- building -----------------------------------------------------------------

TORIC_BASES = {"projective_space", "fan", "product", "blowup"}


def build_fan(spec: dict) -> Fan:
    """Build a fan from a toric base description.

    Forms: ``{"type": "projective_space", "n": k}``, ``{"type": "fan", "fan": {...}}``,
    ``{"type": "product", "factors": [spec, spec]}``,
    ``{"type": "split_bundle", "degrees": [...]}`` and
    ``{"type": "blowup", "of": spec, "cones": [[i, j, ..], ..]}`` (successive
    star subdivisions, indices into the current ray list).
    """
    kind = spec.get("type")
    if kind == "projective_space":
        return projective_space_fan(int(spec["n"]))
    if kind == "fan":
        return Fan.from_json(spec["fan"])
    if kind == "product":
        f, g = (build_fan(s) for s in spec["factors"])
        return product_fan(f, g)
    if kind == "split_bundle":
        return split_bundle_fan(spec["degrees"])
    if kind == "blowup":
        fan = build_fan(spec["of"])
        for cone in spec["cones"]:
            fan = star_subdivision(fan, cone)
        return fan
    raise DomainError(f"unknown toric base type {kind!r}")


def toric_report(fan: Fan, name: str = "toric") -> InvariantReport:
    """Full invariant report of a smooth complete toric fourfold."""
    v = validate_fan(fan)
    if not (v.smooth and v.complete):
        raise DomainError(f"{name}: fan is not smooth and complete: {'; '.join(v.diagnostics)}")
    if fan.dim != 4:
        raise DomainError(f"{name}: expected a fourfold, got dimension {fan.dim}")
    cn = toric.chern_numbers(fan)
    chi_mK = toric.chi_divisor(fan, fan.anticanonical())
    if chi_mK != chi_anticanonical(cn.c1_4, cn.c1_2c2, 1):
        raise InconsistencyError(f"{name}: HRR and the closed chi(-K) formula disagree")
    betti = toric.betti_numbers(fan)
    if cn.c4 != len(fan.max_cones) or cn.c4 != sum(betti):
        raise InconsistencyError(f"{name}: Euler characteristic mismatch")
    return InvariantReport(
        name=name,
        K4=cn.c1_4,
        K2c2=cn.c1_2c2,
        chiO=toric.chi_divisor(fan, (0,) * fan.n_rays),
        chi_mK=chi_mK,
        rho=fan.picard_number,
        betti=betti,
        b3=betti[3],
        h22=betti[4],
        h13=0,
        chiT=toric.chi_tangent(fan),
        delta=toric.lefschetz_defect(fan),
        fano=toric.is_fano(fan),
        provenance={f: "toric" for f in REPORT_FIELDS + ("betti", "fano")},
    )


def _bundle_center(ring: BundleRing, spec: dict, k: int) -> SurfaceCenterData:
    kind = spec.get("type")
    name = spec.get("name", f"center {k}")
    if kind == "section":
        return center_data_section(ring, spec["normal_degrees"], name=name)
    if kind == "ci":
        classes = [ring.element(xi, h) for xi, h in spec["classes"]]
        return center_data_complete_intersection(
            ring, classes, h11=spec["h11"], rational=spec.get("rational", True), name=name
        )
    if kind == "literal":
        data = {k2: v for k2, v in spec.items() if k2 != "type"}
        data.setdefault("name", name)
        return SurfaceCenterData.from_json(data)
    raise DomainError(f"center type {kind!r} is not allowed on a split-bundle base")


def evaluate_recipe(recipe: ConstructionRecipe) -> InvariantReport:
    if not recipe.constructible:
        raise NotConstructibleError(
            f"{recipe.name}: expected values only; construct via search or an external fan file"
        )
    base = recipe.base
    kind = base.get("type")
    if kind == "split_bundle" and any(c.get("type") != "star" for c in recipe.centers):
        return _evaluate_bundle(recipe)
    if kind in TORIC_BASES or kind == "split_bundle":
        fan = build_fan(base)
        for c in recipe.centers:
            if c.get("type") != "star":
                raise DomainError(f"center type {c.get('type')!r} is not allowed on a toric base")
            fan = star_subdivision(fan, c["cone"])
        rep = toric_report(fan, recipe.name)
        rep.metadata = dict(recipe.metadata)
        return rep
    raise DomainError(f"unknown base type {kind!r}")


def _evaluate_bundle(recipe: ConstructionRecipe) -> InvariantReport:
    ring = BundleRing(tuple(recipe.base["degrees"]))
    inv = bundle_invariants(ring)
    steps = [inv]
    for k, spec in enumerate(recipe.centers):
        inv = blowup_update(inv, _bundle_center(ring, spec, k))
        steps.append(inv)
    prov = {f: "bundle+blowup" for f in ("K4", "K2c2", "chi_mK", "rho", "b3", "h22", "h13", "betti")}
    prov["chiO"] = "rational"
    return InvariantReport(
        name=recipe.name,
        K4=inv.K4,
        K2c2=inv.K2c2,
        chiO=inv.chiO,
        chi_mK=inv.chi_mK,
        rho=inv.rho,
        betti=inv.betti,
        b3=inv.b3,
        h22=inv.h22,
        h13=inv.h13,
        provenance=prov,
        steps=tuple(steps),
        metadata=dict(recipe.metadata),
    )


# --- built-in recipes ------------------------------------------------------------

S4_SPEC = {
    "type": "blowup",
    "of": {"type": "projective_space", "n": 2},
    "cones": [[0, 1], [1, 2], [0, 2]],
}

QUADRIC_IN_P4 = {
    "type": "literal",
    "name": "quadric surface",
    "KS2": 8, "chiOS": 1, "c2N": 4, "KZS2": 50, "KSKZS": 20, "b1": 0, "h11": 2, "h02": 0,
}

_COMPUTABLE = ("K4", "K2c2", "chi_mK", "b3", "h22", "h13", "rho")


def _row(name: str, keys=None) -> dict:
    row = TABLE_1[name]
    return {k: row[k] for k in (keys or row)}


def builtin_recipes() -> list[ConstructionRecipe]:
    stub_note = "construct via search or external fan file"
    recipes = [
        ConstructionRecipe(
            name, None, (), _row(name),
            {"kind": "toric", "note": stub_note, "rigid": "yes"},
        )
        for name in ("K1", "K2", "K3")
    ]
    recipes.append(
        ConstructionRecipe(
            "K4",
            {"type": "product", "factors": [{"type": "projective_space", "n": 2}, S4_SPEC]},
            (),
            _row("K4"),
            {"kind": "toric", "description": "P^2 x S_4, S_4 the blow-up of P^2 at three non-collinear points", "rigid": "yes"},
        )
    )
    recipes.append(
        ConstructionRecipe(
            "ex1",
            {"type": "split_bundle", "degrees": [0, 0, 1]},
            (
                {"type": "section", "normal_degrees": [0, -1], "name": "F_p"},
                {"type": "section", "normal_degrees": [0, -1], "name": "F_q"},
                QUADRIC_IN_P4,
            ),
            _row("ex1", _COMPUTABLE),
            {
                "kind": "non-toric",
                "description": "blow-up of Bl_line P^4 along F_p, F_q and the transform of a quadric surface",
                "discriminant": "(P^1 x P^1) disjoint union P^2",
                "exceptional": "Exc = P^1 x P^2 with normal bundle O(-1,-1)",
                "rigid": "yes",
                "table_chiT": "3",
                "table_delta": "3",
            },
        )
    )
    recipes.append(
        ConstructionRecipe(
            "ex2",
            {"type": "split_bundle", "degrees": [0, 0, 2]},
            (
                {"type": "section", "normal_degrees": [0, -2], "name": "F_1"},
                {"type": "section", "normal_degrees": [0, -2], "name": "F_2"},
                {"type": "ci", "classes": [[1, 0], [2, 0]], "h11": 8, "name": "S (del Pezzo, degree 2)"},
            ),
            _row("ex2", _COMPUTABLE),
            {
                "kind": "non-toric",
                "description": "blow-up of P(O+O+O(2)) over P^2 along two fibers of D -> curve and a (1,2) complete intersection",
                "discriminant": "S disjoint union P^2, S del Pezzo of degree 2",
                "exceptional": "Exc = P^1 x P^2 with normal bundle O(-1,-2)",
                "deformations": "h1(T) = h0(T) + 6 >= 6; positive-dimensional family",
                "table_chiT": "-6",
                "table_delta": "3",
            },
        )
    )
    return recipes


def get_recipe(name: str) -> ConstructionRecipe:
    for r in builtin_recipes():
        if r.name == name:
            return r
    raise DomainError(f"no built-in recipe named {name!r}")


def identify(report: InvariantReport) -> list[str]:
    """Table rows whose every entry matches the report."""
    return [name for name, row in TABLE_1.items() if verify_table(report, row).passed]


# --- the d = 1 toric search -------------------------------------------------------

FIBER_SECTION_CONES = ((3, 4), (3, 5), (4, 5))


@dataclass
class SearchHit:
    degrees: tuple[int, int]
    fan: Fan
    report: InvariantReport
    duplicates: tuple[tuple[int, int], ...] = ()
    matches: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "degrees": list(self.degrees),
            "duplicates": [list(d) for d in self.duplicates],
            "matches_table_rows": list(self.matches),
            "fan": self.fan.to_json(),
            "report": self.report.to_json(),
        }


def search_d1(max_degree: int = 3, order: tuple[int, int, int] = (0, 1, 2)) -> list[SearchHit]:
    """Blow up the three coordinate sections of P(O + O(b) + O(c)), 0 <= b <= c <= max_degree.

    Keeps the configurations giving a smooth complete Fano with rho = 5 and
    delta = 3, deduplicated by invariant tuple (the first (b, c) wins; the
    others are listed as duplicates). ``order`` permutes the three
    subdivisions.
    """
    if max_degree < 0:
        raise DomainError("max_degree must be non-negative")
    hits: dict[tuple, SearchHit] = {}
    for b in range(max_degree + 1):
        for c in range(b, max_degree + 1):
            fan = split_bundle_fan((0, b, c))
            for k in order:
                fan = star_subdivision(fan, FIBER_SECTION_CONES[k])
            v = validate_fan(fan)
            if not (v.smooth and v.complete) or not toric.is_fano(fan):
                continue
            rep = toric_report(fan, f"d1({b},{c})")
            if rep.rho != 5 or rep.delta != 3:
                continue
            key = rep.tuple
            if key in hits:
                hits[key].duplicates += ((b, c),)
            else:
                rep.provenance["identification"] = "derived by invariant matching"
                hits[key] = SearchHit((b, c), fan, rep, matches=tuple(identify(rep)))
    return sorted(hits.values(), key=lambda h: h.degrees)
