"""Simplicial fans in a lattice of rank at most 4.

A :class:`Fan` is an immutable value: a tuple of primitive integer rays and a
tuple of maximal cones, each cone a strictly increasing tuple of ray indices.
All constructors return fresh fans, and every one of them produces fans that
pass :func:`validate_fan`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

import sympy

from .errors import DomainError, StructuralError

Ray = tuple[int, ...]
Cone = tuple[int, ...]

__all__ = [
    "Fan",
    "FanValidation",
    "projective_space_fan",
    "product_fan",
    "split_bundle_fan",
    "star_subdivision",
    "validate_fan",
    "pullback_divisor",
]


def _primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def exact_inverse(rows: Sequence[Sequence[int]]) -> tuple[tuple[Fraction, ...], ...]:
    """Inverse of an integer matrix over the rationals (row-major)."""
    inv = sympy.Matrix(rows).inv()
    n = inv.rows
    return tuple(
        tuple(Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n))
        for i in range(n)
    )


def exact_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    return sympy.Matrix(rows).rank()


@dataclass(frozen=True)
class Fan:
    """A simplicial fan given by its rays and maximal cones.

    ``named_classes`` optionally records divisor classes (as coefficient
    vectors over the rays) under human-readable names, e.g. ``"h"`` and
    ``"xi"`` on a projectivized bundle. It does not take part in equality.
    """

    dim: int
    rays: tuple[Ray, ...]
    max_cones: tuple[Cone, ...]
    named_classes: tuple[tuple[str, tuple[int, ...]], ...] = field(
        default=(), compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(
            self, "max_cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        )
        object.__setattr__(
            self,
            "named_classes",
            tuple((str(k), tuple(int(x) for x in v)) for k, v in self.named_classes),
        )

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @property
    def picard_number(self) -> int:
        return len(self.rays) - self.dim

    def divisor(self, name: str) -> tuple[int, ...]:
        """Coefficient vector of a named divisor class."""
        for key, vec in self.named_classes:
            if key == name:
                return vec
        raise KeyError(name)

    def ray_divisor(self, i: int) -> tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in range(self.n_rays))

    def anticanonical(self) -> tuple[int, ...]:
        return (1,) * self.n_rays

    @cached_property
    def faces(self) -> frozenset[frozenset[int]]:
        """Every cone of the fan (including the zero cone) as a frozenset."""
        out = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(frozenset(s) for s in combinations(c, k))
        return frozenset(out)

    def is_cone(self, indices: Iterable[int]) -> bool:
        return frozenset(indices) in self.faces

    def cones_of_dim(self, k: int) -> list[Cone]:
        return sorted(tuple(sorted(f)) for f in self.faces if len(f) == k)

    def face_numbers(self) -> list[int]:
        counts = [0] * (self.dim + 1)
        for f in self.faces:
            counts[len(f)] += 1
        return counts

    def cones_containing(self, indices: Iterable[int]) -> list[Cone]:
        s = set(indices)
        return [c for c in self.max_cones if s.issubset(c)]

    @cached_property
    def dual_bases(self) -> dict[Cone, dict[int, tuple[Fraction, ...]]]:
        """For each maximal cone, the covector dual to each of its rays."""
        out = {}
        for c in self.max_cones:
            inv = exact_inverse([self.rays[i] for i in c])
            # column k of the inverse pairs to 1 with ray c[k] and 0 with the rest
            out[c] = {
                c[k]: tuple(inv[row][k] for row in range(self.dim)) for k in range(len(c))
            }
        return out

    @cached_property
    def relations(self) -> dict[Cone, dict[int, tuple[Fraction, ...]]]:
        """``relations[cone][r][j]`` = pairing of the covector dual to ``r`` with ray ``j``."""
        out = {}
        for c, duals in self.dual_bases.items():
            out[c] = {}
            for r, m in duals.items():
                vals = [self.pairing(m, j) for j in range(self.n_rays)]
                out[c][r] = tuple(int(v) if v.denominator == 1 else v for v in vals)
        return out

    def pairing(self, m: Sequence[Fraction], i: int) -> Fraction:
        return sum((a * b for a, b in zip(m, self.rays[i])), Fraction(0))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        try:
            dim = int(data["dim"])
            rays = [list(r) for r in data["rays"]]
            cones = [list(c) for c in data["max_cones"]]
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed fan object: {exc!r}") from exc
        defects = []
        for k, c in enumerate(cones):
            if any(not isinstance(i, int) for i in c):
                defects.append(f"cone {k} has non-integer indices")
            elif any(a >= b for a, b in zip(c, c[1:])):
                defects.append(f"cone {k} indices not strictly increasing: {c}")
        if defects:
            raise StructuralError(defects)
        fan = cls(dim, tuple(map(tuple, rays)), tuple(map(tuple, cones)))
        check_structure(fan)
        return fan


@dataclass(frozen=True)
class FanValidation:
    smooth: bool
    complete: bool
    diagnostics: tuple[str, ...] = ()


def check_structure(fan: Fan) -> None:
    """Raise :class:`StructuralError` listing every structural defect."""
    defects = []
    if not 1 <= fan.dim <= 4:
        defects.append(f"unsupported dimension {fan.dim}")
    for i, r in enumerate(fan.rays):
        if len(r) != fan.dim:
            defects.append(f"ray {i} has {len(r)} coordinates, expected {fan.dim}")
        elif not any(r):
            defects.append(f"ray {i} is zero")
        elif not _primitive(r):
            defects.append(f"non-primitive ray {i}: {list(r)}")
    if len(set(fan.rays)) != len(fan.rays):
        defects.append("duplicate rays")
    used = set()
    for k, c in enumerate(fan.max_cones):
        if any(not 0 <= i < fan.n_rays for i in c):
            defects.append(f"cone {k} has out-of-range index: {list(c)}")
            continue
        if len(set(c)) != len(c):
            defects.append(f"cone {k} repeats a ray: {list(c)}")
        if len(c) != fan.dim:
            defects.append(f"cone {k} has {len(c)} rays; only full-dimensional simplicial cones are supported")
        used.update(c)
    if len(set(fan.max_cones)) != len(fan.max_cones):
        defects.append("duplicate maximal cones")
    unused = sorted(set(range(fan.n_rays)) - used)
    if unused:
        defects.append(f"rays not in any maximal cone: {unused}")
    if defects:
        raise StructuralError(defects)
    for k, c in enumerate(fan.max_cones):
        if sympy.Matrix([fan.rays[i] for i in c]).det() == 0:
            defects.append(f"cone {k} is degenerate: {list(c)}")
    if defects:
        raise StructuralError(defects)


def _probe_vectors(dim: int) -> list[tuple[int, ...]]:
    base = (1009, 7919, 104729, 1299709)
    signs = [(1, 1, 1, 1), (-1, 1, -1, 1), (1, -1, -1, 1)]
    return [tuple(s[i] * base[i] + i for i in range(dim)) for s in signs]


def _cone_coordinates(fan: Fan, cone: Cone, p: Sequence[int]) -> list[Fraction]:
    duals = fan.dual_bases[cone]
    return [sum((a * b for a, b in zip(duals[i], p)), Fraction(0)) for i in cone]


def _improper_pairs(fan: Fan) -> list[tuple[Cone, Cone]]:
    """Pairs of maximal cones whose intersection is not a common face.

    Solved as a small LP per pair: look for a point of both cones with positive
    weight on a ray outside the common face.
    """
    from scipy.optimize import linprog

    bad = []
    for s, t in combinations(fan.max_cones, 2):
        common = set(s) & set(t)
        vs = [fan.rays[i] for i in s]
        vt = [fan.rays[i] for i in t]
        n = len(vs) + len(vt)
        a_eq = [[vs[k][d] for k in range(len(vs))] + [-vt[k][d] for k in range(len(vt))]
                for d in range(fan.dim)]
        cost = [0.0 if i in common else -1.0 for i in s] + [0.0 if i in common else -1.0 for i in t]
        res = linprog(cost, A_eq=a_eq, b_eq=[0] * fan.dim, bounds=[(0, 1)] * n, method="highs")
        if res.status == 0 and -res.fun > 1e-9:
            bad.append((s, t))
    return bad


def validate_fan(fan: Fan) -> FanValidation:
    """Check smoothness and completeness.

    Structural defects raise :class:`StructuralError`. Completeness is
    certified by pairing every facet with exactly one other maximal cone on
    the opposite side and locating a generic probe vector in exactly one
    maximal cone; together these force a covering of degree one. When the
    certificate fails, cones are also checked pairwise for proper
    intersection.
    """
    check_structure(fan)
    diagnostics = []

    smooth = True
    for c in fan.max_cones:
        det = sympy.Matrix([fan.rays[i] for i in c]).det()
        if abs(det) != 1:
            smooth = False
            diagnostics.append(f"non-smooth cone {list(c)}: determinant {det}")

    facets: dict[Cone, list[Cone]] = {}
    for c in fan.max_cones:
        for f in combinations(c, fan.dim - 1):
            facets.setdefault(f, []).append(c)
    complete = True
    for f, owners in sorted(facets.items()):
        if len(owners) == 1:
            complete = False
            diagnostics.append(f"unmatched facet {list(f)} of cone {list(owners[0])}")
        elif len(owners) > 2:
            complete = False
            diagnostics.append(f"facet {list(f)} shared by {len(owners)} cones")
        else:
            s, t = owners
            (u,) = set(s) - set(f)
            (w,) = set(t) - set(f)
            if fan.pairing(fan.dual_bases[s][u], w) >= 0:
                complete = False
                diagnostics.append(
                    f"cones {list(s)} and {list(t)} lie on the same side of facet {list(f)}"
                )

    if complete:
        for p in _probe_vectors(fan.dim):
            coords = {c: _cone_coordinates(fan, c, p) for c in fan.max_cones}
            if any(x == 0 for cs in coords.values() for x in cs):
                continue
            hits = [c for c, cs in coords.items() if all(x > 0 for x in cs)]
            if len(hits) != 1:
                complete = False
                diagnostics.append(f"generic probe {list(p)} lies in {len(hits)} maximal cones")
            break
        else:
            complete = False
            diagnostics.append("no generic probe vector found")

    if not complete:
        for s, t in _improper_pairs(fan):
            diagnostics.append(f"cones {list(s)} and {list(t)} do not meet in a common face")

    return FanValidation(smooth, complete, tuple(diagnostics))


# --- constructors -----------------------------------------------------------


def projective_space_fan(n: int) -> Fan:
    """Fan of P^n for 1 <= n <= 4: standard basis plus the negative sum."""
    if not isinstance(n, int) or not 1 <= n <= 4:
        raise DomainError(f"projective space dimension must be in 1..4, got {n!r}")
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n, -1, -1)]
    return Fan(n, tuple(rays), tuple(cones), (("H", tuple([1] + [0] * n)),))


def product_fan(f: Fan, g: Fan) -> Fan:
    d = f.dim + g.dim
    if d > 4:
        raise DomainError(f"product dimension {d} exceeds 4")
    rays = [r + (0,) * g.dim for r in f.rays] + [(0,) * f.dim + r for r in g.rays]
    off = f.n_rays
    cones = [c + tuple(i + off for i in e) for c in f.max_cones for e in g.max_cones]
    named = [(f"{k}_1", v + (0,) * g.n_rays) for k, v in f.named_classes]
    named += [(f"{k}_2", (0,) * f.n_rays + v) for k, v in g.named_classes]
    return Fan(d, tuple(rays), tuple(cones), tuple(named))


def split_bundle_fan(degrees: Sequence[int]) -> Fan:
    """Fan of the projectivization of O(d_1) + ... + O(d_r) over P^2.

    Ray order: base rays ``w1, w2, w0`` (``w0`` carries the twist), then the
    fiber rays ``u_1 .. u_r``. With twist ``(d_2, .., d_r)`` the fiber divisor
    of ``u_k`` (k < r) is ``xi - d_{k+1} h`` and that of ``u_r`` is ``xi``, so
    the toric Chow ring satisfies ``prod (xi - d_i h) = 0`` with
    ``h^2 xi^(r-1) = 1``. Named classes: ``h`` and ``xi``.
    """
    degrees = [int(d) for d in degrees]
    r = len(degrees)
    if r not in (2, 3):
        raise DomainError(f"bundle rank must be 2 or 3, got {r}")
    if degrees[0] != 0 or any(d < 0 for d in degrees) or degrees != sorted(degrees):
        raise DomainError(f"degrees must be normalized 0 = d_1 <= ... <= d_r, got {degrees}")
    fdim = r - 1
    zero = (0,) * fdim
    twist = tuple(degrees[1:])
    rays = [(1, 0) + zero, (0, 1) + zero, (-1, -1) + twist]
    for k in range(fdim):
        rays.append((0, 0) + tuple(1 if j == k else 0 for j in range(fdim)))
    rays.append((0, 0) + tuple(-1 for _ in range(fdim)))
    base_cones = [(0, 1), (1, 2), (0, 2)]
    fiber = list(range(3, 3 + r))
    cones = [
        b + tuple(j for j in fiber if j != skip) for b in base_cones for skip in reversed(fiber)
    ]
    n = len(rays)
    h = tuple(1 if i == 0 else 0 for i in range(n))
    xi = tuple(1 if i == n - 1 else 0 for i in range(n))
    return Fan(fdim + 2, tuple(rays), tuple(cones), (("h", h), ("xi", xi)))


def pullback_divisor(fan: Fan, sigma: Sequence[int], coeffs: Sequence[int]) -> tuple[int, ...]:
    """Pull a divisor back along the star subdivision of ``fan`` at ``sigma``.

    The new ray is appended last; its coefficient is the sum of the
    coefficients on the rays of ``sigma``.
    """
    return tuple(coeffs) + (sum(coeffs[i] for i in sigma),)


def star_subdivision(fan: Fan, sigma: Iterable[int]) -> Fan:
    """Star subdivision at the cone ``sigma`` (the toric blow-up of its orbit closure).

    The new ray (the sum of the rays of ``sigma``) is appended to the ray list;
    each maximal cone containing ``sigma`` is replaced by the cones obtained by
    swapping one ray of ``sigma`` for the new ray.
    """
    sigma = tuple(sorted(set(int(i) for i in sigma)))
    if len(sigma) < 2:
        raise DomainError("star subdivision needs a cone of dimension >= 2")
    if any(not 0 <= i < fan.n_rays for i in sigma) or not fan.is_cone(sigma):
        raise DomainError(f"{list(sigma)} is not a cone of the fan")
    new_ray = tuple(sum(fan.rays[i][d] for i in sigma) for d in range(fan.dim))
    if not _primitive(new_ray):
        raise DomainError(f"star subdivision of a non-smooth cone {list(sigma)}")
    new = fan.n_rays
    cones = []
    for c in fan.max_cones:
        if set(sigma).issubset(c):
            for i in sigma:
                cones.append(tuple(sorted([j for j in c if j != i] + [new])))
        else:
            cones.append(c)
    named = tuple((k, pullback_divisor(fan, sigma, v)) for k, v in fan.named_classes)
    return Fan(fan.dim, fan.rays + (new_ray,), tuple(cones), named)
