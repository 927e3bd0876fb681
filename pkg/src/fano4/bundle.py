"""Chow ring of a split projective bundle P(O(d_1) + ... + O(d_r)) over P^2.

The ring is generated by ``h`` (pullback of a line) and the tautological
class ``xi`` subject to ``h^3 = 0`` and

    xi^r = c1(E) h xi^(r-1) - c2(E) h^2 xi^(r-2) + c3(E) h^3 xi^(r-3),

normalized by ``h^2 xi^(r-1) = 1``. With this sign convention the degrees
(0, 0, 2) give ``xi^4 = 4``, ``h xi^3 = 2`` and ``h^2 xi^2 = 1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod
from typing import Mapping, Sequence

from .errors import DomainError

__all__ = ["BundleRing", "RingElement", "BundleChern", "bundle_ring", "canonical_and_chern"]


def _elementary(values: Sequence[int], k: int) -> int:
    return sum(prod(c) for c in combinations(values, k))


@dataclass(frozen=True)
class BundleRing:
    degrees: tuple[int, ...]

    def __post_init__(self):
        d = tuple(int(x) for x in self.degrees)
        if len(d) not in (2, 3):
            raise DomainError(f"bundle rank must be 2 or 3, got {len(d)}")
        if d[0] != 0 or any(x < 0 for x in d) or list(d) != sorted(d):
            raise DomainError(f"degrees must be normalized 0 = d_1 <= ... <= d_r, got {list(d)}")
        object.__setattr__(self, "degrees", d)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def dim(self) -> int:
        return self.rank + 1

    @property
    def chern_E(self) -> tuple[int, int, int]:
        return tuple(_elementary(self.degrees, k) for k in (1, 2, 3))

    def basis(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(3) for j in range(self.rank)]

    @property
    def h(self) -> "RingElement":
        return RingElement(self, {(1, 0): Fraction(1)})

    @property
    def xi(self) -> "RingElement":
        return RingElement(self, {(0, 1): Fraction(1)})

    def one(self) -> "RingElement":
        return RingElement(self, {(0, 0): Fraction(1)})

    def element(self, xi_coeff=0, h_coeff=0) -> "RingElement":
        """The divisor class ``xi_coeff * xi + h_coeff * h``."""
        return self.xi * xi_coeff + self.h * h_coeff

    def reduce_monomial(self, i: int, j: int) -> dict[tuple[int, int], Fraction]:
        """Canonical form of ``h^i xi^j`` on the monomial basis."""
        r = self.rank
        if i > 2:
            return {}
        if j < r:
            return {(i, j): Fraction(1)}
        c1, c2, c3 = self.chern_E
        out: dict[tuple[int, int], Fraction] = {}
        terms = [(1, c1), (2, -c2), (3, c3)]
        for k, coef in terms:
            if coef == 0 or k > r:
                continue
            for mono, v in self.reduce_monomial(i + k, j - k).items():
                out[mono] = out.get(mono, 0) + coef * v
        return {m: v for m, v in out.items() if v}


@dataclass(frozen=True)
class RingElement:
    ring: BundleRing
    coeffs: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        reduced: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in dict(self.coeffs).items():
            v = Fraction(v)
            if not v:
                continue
            for mono, w in self.ring.reduce_monomial(i, j).items():
                reduced[mono] = reduced.get(mono, 0) + v * w
        object.__setattr__(self, "coeffs", {m: v for m, v in sorted(reduced.items()) if v})

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise DomainError("elements of different bundle rings")
            return other
        return RingElement(self.ring, {(0, 0): Fraction(other)})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for m, v in other.coeffs.items():
            out[m] = out.get(m, 0) + v
        return RingElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.ring, {m: -v for m, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RingElement):
            return RingElement(self.ring, {m: v * Fraction(other) for m, v in self.coeffs.items()})
        other = self._coerce(other)
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in self.coeffs.items():
            for (k, l), w in other.coeffs.items():
                out[(i + k, j + l)] = out.get((i + k, j + l), 0) + v * w
        return RingElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((self.ring, tuple(self.coeffs.items())))

    def component(self, degree: int) -> "RingElement":
        return RingElement(self.ring, {m: v for m, v in self.coeffs.items() if sum(m) == degree})

    def degrees_present(self) -> set[int]:
        return {sum(m) for m in self.coeffs}

    def divisor_coefficients(self) -> tuple[Fraction, Fraction]:
        """``(xi, h)`` coefficients of a pure degree-one element."""
        if self.degrees_present() - {1}:
            raise DomainError("not a divisor class")
        return self.coeffs.get((0, 1), Fraction(0)), self.coeffs.get((1, 0), Fraction(0))

    def integrate(self) -> Fraction:
        """Coefficient of the point class ``h^2 xi^(r-1)``; lower degrees integrate to 0."""
        return self.coeffs.get((2, self.ring.rank - 1), Fraction(0))

    def to_json(self) -> dict:
        return {
            "degrees": list(self.ring.degrees),
            "coeffs": {f"h^{i} xi^{j}": str(v) for (i, j), v in self.coeffs.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "RingElement":
        ring = BundleRing(tuple(data["degrees"]))
        coeffs = {}
        for key, val in data["coeffs"].items():
            m = re.fullmatch(r"\s*h\^(\d+)\s+xi\^(\d+)\s*", key)
            if not m:
                raise DomainError(f"bad monomial key {key!r}")
            coeffs[(int(m.group(1)), int(m.group(2)))] = Fraction(val)
        return cls(ring, coeffs)


def bundle_ring(degrees: Sequence[int]) -> BundleRing:
    return BundleRing(tuple(degrees))


@dataclass(frozen=True)
class BundleChern:
    K: RingElement
    c2: RingElement
    K4: int | None
    K2c2: int | None
    minus_K_cubed: int | None


def total_chern_class(ring: BundleRing) -> RingElement:
    """c(T) = (1 + h)^3 * prod_i (1 + xi - d_i h), from the relative Euler sequence."""
    h, xi = ring.h, ring.xi
    c = (1 + h) ** 3
    for d in ring.degrees:
        c = c * (1 + xi - h * d)
    return c


def canonical_and_chern(ring: BundleRing) -> BundleChern:
    """Canonical class, second Chern class and the top anticanonical numbers.

    For rank 3 (a fourfold) K^4 and K^2 c2 are returned; for rank 2 (a
    threefold) (-K)^3 is returned instead.
    """
    c = total_chern_class(ring)
    c1 = c.component(1)
    K = ring.xi * (-ring.rank) + ring.h * (ring.chern_E[0] - 3)
    assert K == -c1
    c2 = c.component(2)
    if ring.rank == 3:
        k4 = (K**4).integrate()
        k2c2 = (K * K * c2).integrate()
        return BundleChern(K, c2, int(k4), int(k2c2), None)
    return BundleChern(K, c2, None, None, int(((-K) ** 3).integrate()))
