"""Exact intersection theory on smooth complete toric varieties.

Classes are polynomials in the invariant divisors ``D_0 .. D_{n-1}``, stored as
dicts from sorted index tuples (monomials with multiplicity) to rationals.
Products whose support is not a cone vanish (Stanley-Reisner relations), and
top-degree monomials are evaluated by the reduction in :meth:`_Engine.evaluate`.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial, prod
from typing import Callable, Iterable, Sequence

from .errors import DomainError, InconsistencyError, UnsupportedFanError
from .fan import Cone, Fan, exact_rank, validate_fan

Poly = dict[tuple[int, ...], Fraction]
Chooser = Callable[[list], object]

__all__ = [
    "ChernNumbers",
    "intersection_number",
    "integrate",
    "chern_numbers",
    "chi_divisor",
    "chi_tangent",
    "betti_numbers",
    "nef_ample_flags",
    "is_fano",
    "wall_curve_class",
    "walls",
    "lefschetz_defect",
]


def _linear(coeffs: Sequence[int]) -> Poly:
    return {(i,): a for i, a in enumerate(coeffs) if a}


class _Engine:
    """Per-fan memo of monomial evaluations. Shared between threads."""

    def __init__(self, fan: Fan):
        self.fan = fan
        self._memo: dict[tuple[int, ...], Fraction] = {}
        self._lock = threading.Lock()

    def mul(self, a: Poly, b: Poly) -> Poly:
        out: Poly = {}
        fan = self.fan
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(sorted(ma + mb))
                if len(m) > fan.dim or not fan.is_cone(m):
                    continue
                out[m] = out.get(m, 0) + ca * cb
        return {m: c for m, c in out.items() if c}

    def power(self, a: Poly, k: int) -> Poly:
        out: Poly = {(): Fraction(1)}
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def integrate(self, p: Poly, chooser: Chooser | None = None) -> Fraction:
        total = Fraction(0)
        local: dict = {}
        for m, c in p.items():
            if len(m) == self.fan.dim:
                total += c * self.evaluate(m, chooser, local)
        return total

    def evaluate(
        self, mono: tuple[int, ...], chooser: Chooser | None = None, local: dict | None = None
    ) -> Fraction:
        """Degree of a top-degree monomial in the ray divisors.

        A repeated ray ``r`` is traded, via the linear relation of the
        covector dual to ``r`` in a maximal cone containing the support, for
        rays outside that cone. Each trade adds a new ray to the support, so
        the recursion ends after at most ``dim - 1`` steps. ``chooser`` picks
        the cone (default: lexicographically least); results do not depend
        on it.
        """
        if chooser is None:
            with self._lock:
                hit = self._memo.get(mono)
            if hit is not None:
                return hit
        else:
            # randomized runs memoize per call only, so choices never leak into the shared memo
            local = {} if local is None else local
            if mono in local:
                return local[mono]
        val = self._evaluate(mono, chooser, local)
        if chooser is None:
            with self._lock:
                self._memo[mono] = val
        else:
            local[mono] = val
        return val

    def _evaluate(self, mono, chooser, local):
        fan = self.fan
        support = sorted(set(mono))
        if not fan.is_cone(support):
            return 0
        if len(support) == len(mono):
            return 1
        counts = Counter(mono)
        repeated = [i for i in support if counts[i] > 1]
        candidates = fan.cones_containing(support)
        if chooser is None:
            cone, rho = min(candidates), repeated[0]
        else:
            cone = chooser(candidates)
            rho = chooser(repeated)
        rel = fan.relations[cone][rho]
        rest = list(mono)
        rest.remove(rho)
        total = 0
        for j in range(fan.n_rays):
            if j in cone:
                continue
            c = rel[j]
            if c:
                total -= c * self.evaluate(tuple(sorted(rest + [j])), chooser, local)
        return total

    # characteristic classes ------------------------------------------------

    @property
    def chern(self) -> list[Poly]:
        """Homogeneous pieces c_0 .. c_dim of the total Chern class."""
        try:
            return self._chern
        except AttributeError:
            pass
        fan = self.fan
        pieces: list[Poly] = [dict() for _ in range(fan.dim + 1)]
        for f in fan.faces:
            pieces[len(f)][tuple(sorted(f))] = 1
        self._chern = pieces
        return pieces

    def todd(self) -> list[Poly]:
        try:
            return self._todd
        except AttributeError:
            pass
        c = self.chern
        n = self.fan.dim
        one: Poly = {(): Fraction(1)}

        def comb_(*terms):
            out: Poly = {}
            for coef, poly in terms:
                for m, v in poly.items():
                    out[m] = out.get(m, 0) + coef * v
            return {m: v for m, v in out.items() if v}

        mul = self.mul
        c1 = c[1]
        c2 = c[2] if n >= 2 else {}
        c3 = c[3] if n >= 3 else {}
        c4 = c[4] if n >= 4 else {}
        c1sq = mul(c1, c1)
        td = [
            one,
            comb_((Fraction(1, 2), c1)),
            comb_((Fraction(1, 12), c1sq), (Fraction(1, 12), c2)),
            comb_((Fraction(1, 24), mul(c1, c2))),
            comb_(
                (Fraction(-1, 720), mul(c1sq, c1sq)),
                (Fraction(4, 720), mul(c1sq, c2)),
                (Fraction(3, 720), mul(c2, c2)),
                (Fraction(1, 720), mul(c1, c3)),
                (Fraction(-1, 720), c4),
            ),
        ]
        self._todd = td[: n + 1]
        return self._todd

    def chi_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """chi(O(D)) as a polynomial in the coefficients of D.

        Expanding ch(D) = sum_k D^k / k! over monomials D^m gives weight
        1 / prod(e_i!) times the degree of D^m . td_{dim - |m|}; only monomials
        supported on a cone survive.
        """
        try:
            return self._chi_terms
        except AttributeError:
            pass
        n = self.fan.dim
        td = self.todd()
        terms = []
        for f in sorted(self.fan.faces, key=lambda f: (len(f), sorted(f))):
            base = tuple(sorted(f))
            for k in range(len(base), n + 1):
                for extra in combinations_with_replacement(base, k - len(base)):
                    mono = tuple(sorted(base + extra))
                    val = self.integrate(self.mul({mono: Fraction(1)}, td[n - k]))
                    if val:
                        weight = prod(factorial(e) for e in Counter(mono).values())
                        terms.append((mono, val / weight))
        self._chi_terms = terms
        return terms


@lru_cache(maxsize=256)
def _engine(fan: Fan) -> _Engine:
    return _Engine(fan)


@lru_cache(maxsize=256)
def _require_smooth_complete(fan: Fan) -> None:
    v = validate_fan(fan)
    if not (v.smooth and v.complete):
        raise UnsupportedFanError(
            "intersection theory needs a smooth complete fan: " + "; ".join(v.diagnostics)
        )


def _check_divisor(fan: Fan, d: Sequence[int]) -> tuple[int, ...]:
    d = tuple(int(x) for x in d)
    if len(d) != fan.n_rays:
        raise DomainError(f"divisor has {len(d)} coefficients, fan has {fan.n_rays} rays")
    return d


def intersection_number(
    fan: Fan, divisors: Sequence[Sequence[int]], chooser: Chooser | None = None
) -> int:
    """Intersection number of ``dim`` divisor classes (coefficient vectors over rays)."""
    _require_smooth_complete(fan)
    if len(divisors) != fan.dim:
        raise DomainError(f"need exactly {fan.dim} divisors, got {len(divisors)}")
    eng = _engine(fan)
    p: Poly = {(): 1}
    for d in divisors:
        p = eng.mul(p, _linear(_check_divisor(fan, d)))
    val = Fraction(eng.integrate(p, chooser))
    if val.denominator != 1:
        raise InconsistencyError(f"non-integral intersection number {val}")
    return int(val)


def integrate(fan: Fan, poly: Poly) -> Fraction:
    """Degree of a class given as a polynomial in the ray divisors."""
    _require_smooth_complete(fan)
    return _engine(fan).integrate(poly)


@dataclass(frozen=True)
class ChernNumbers:
    c1_4: int
    c1_2c2: int
    c1c3: int
    c2_2: int
    c4: int


def chern_numbers(fan: Fan) -> ChernNumbers:
    _require_smooth_complete(fan)
    if fan.dim != 4:
        raise DomainError("Chern numbers are defined here for fourfolds only")
    eng = _engine(fan)
    c = eng.chern
    c1sq = eng.mul(c[1], c[1])
    vals = [
        eng.integrate(eng.mul(c1sq, c1sq)),
        eng.integrate(eng.mul(c1sq, c[2])),
        eng.integrate(eng.mul(c[1], c[3])),
        eng.integrate(eng.mul(c[2], c[2])),
        eng.integrate(c[4]),
    ]
    return ChernNumbers(*(int(v) for v in vals))


def chi_divisor(fan: Fan, d: Sequence[int]) -> int:
    """Euler characteristic of O(D) by Hirzebruch-Riemann-Roch, in exact rationals."""
    _require_smooth_complete(fan)
    d = _check_divisor(fan, d)
    total = Fraction(0)
    for mono, coef in _engine(fan).chi_terms():
        total += coef * prod(d[i] for i in mono)
    if total.denominator != 1:
        raise InconsistencyError(f"Riemann-Roch gave a non-integer {total}")
    return int(total)


def chi_tangent(fan: Fan) -> int:
    """chi(T_X) from the generalized Euler sequence 0 -> O^rho -> sum O(D_i) -> T -> 0."""
    return sum(chi_divisor(fan, fan.ray_divisor(i)) for i in range(fan.n_rays)) - fan.picard_number


def betti_numbers(fan: Fan) -> tuple[int, ...]:
    """Betti numbers b_0 .. b_{2 dim}; the even ones form the h-vector."""
    _require_smooth_complete(fan)
    n = fan.dim
    f = fan.face_numbers()
    # each i-dimensional cone contributes (t^2 - 1)^(n - i) to the Poincare polynomial
    h = [0] * (n + 1)
    for i, fi in enumerate(f):
        e = n - i
        for k in range(e + 1):
            h[k] += fi * comb(e, k) * (-1) ** (e - k)
    out = []
    for k in range(n + 1):
        out.append(h[k])
        if k < n:
            out.append(0)
    return tuple(out)


def walls(fan: Fan) -> list[Cone]:
    return [f for f in fan.cones_of_dim(fan.dim - 1) if len(fan.cones_containing(f)) == 2]


@lru_cache(maxsize=4096)
def _wall_curve(fan: Fan, tau: Cone) -> tuple[int, ...]:
    owners = fan.cones_containing(tau)
    if len(tau) != fan.dim - 1 or len(owners) != 2:
        raise DomainError(f"{list(tau)} is not a wall of the fan")
    s, t = owners
    (u,) = set(s) - set(tau)
    (w,) = set(t) - set(tau)
    duals = fan.dual_bases[s]
    # v_w = -v_u - sum a_i v_i over the wall, so D_i . C = a_i, D_u . C = D_w . C = 1
    coords = {i: fan.pairing(duals[i], w) for i in s}
    if coords[u] != -1:
        raise UnsupportedFanError(f"wall {list(tau)} does not satisfy the smooth wall relation")
    out = [0] * fan.n_rays
    out[u] = 1
    out[w] = 1
    for i in tau:
        out[i] = int(-coords[i])
    return tuple(out)


def wall_curve_class(fan: Fan, tau: Iterable[int]) -> tuple[int, ...]:
    """Intersection numbers ``D_i . V(tau)`` of every ray divisor with a wall curve."""
    _require_smooth_complete(fan)
    return _wall_curve(fan, tuple(sorted(tau)))


def nef_ample_flags(fan: Fan, d: Sequence[int]) -> tuple[bool, bool]:
    """Toric Kleiman criterion over the wall curves: returns ``(nef, ample)``."""
    _require_smooth_complete(fan)
    d = _check_divisor(fan, d)
    degs = [sum(a * b for a, b in zip(d, wall_curve_class(fan, w))) for w in walls(fan)]
    return all(x >= 0 for x in degs), all(x > 0 for x in degs)


def is_fano(fan: Fan) -> bool:
    return nef_ample_flags(fan, fan.anticanonical())[1]


def lefschetz_defect(fan: Fan) -> int:
    """Maximum over invariant prime divisors D of codim of N_1(D, X) in N_1(X).

    N_1(D_i, X) is spanned by the wall curves lying in D_i, i.e. walls
    containing ray i. Only invariant divisors are inspected.
    """
    _require_smooth_complete(fan)
    ws = walls(fan)
    best = 0
    for i in range(fan.n_rays):
        vecs = [wall_curve_class(fan, w) for w in ws if i in w]
        best = max(best, fan.picard_number - exact_rank(vecs))
    return best
