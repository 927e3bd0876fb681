"""Invariants of a smooth fourfold under blow-up along a smooth surface.

A fourfold is tracked through :class:`FourfoldInvariants`; a center through
:class:`SurfaceCenterData`, which holds exactly the numbers the update needs:
K_S^2, chi(O_S), c2 of the normal bundle, (K_Z|S)^2 and K_S . K_Z|S, plus
the Hodge numbers of S.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Optional, Sequence

from .bundle import BundleRing, RingElement, canonical_and_chern
from .errors import DomainError, InconsistencyError

__all__ = [
    "SurfaceCenterData",
    "FourfoldInvariants",
    "chi_anticanonical",
    "blowup_update",
    "bundle_invariants",
    "center_data_section",
    "center_data_complete_intersection",
]


@dataclass(frozen=True)
class SurfaceCenterData:
    name: str
    KS2: int
    chiOS: int
    c2N: int
    KZS2: int
    KSKZS: int
    b1: int = 0
    h11: int = 1
    h02: int = 0

    @property
    def betti(self) -> tuple[int, int, int, int, int]:
        b2 = self.h11 + 2 * self.h02
        return (1, self.b1, b2, self.b1, 1)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "SurfaceCenterData":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names - {"type"}
        if unknown:
            raise DomainError(f"unknown center fields: {sorted(unknown)}")
        kwargs = {k: v for k, v in data.items() if k in names}
        kwargs.setdefault("name", "literal")
        return cls(**kwargs)


def chi_anticanonical(K4: int, K2c2: int, chiO: int) -> int:
    """chi(-K) of a fourfold by Riemann-Roch: (2 K^4 + K^2 c2) / 12 + chi(O)."""
    num = 2 * K4 + K2c2
    if num % 12:
        raise InconsistencyError(f"2*K^4 + K^2.c2 = {num} is not divisible by 12")
    return num // 12 + chiO


@dataclass(frozen=True)
class FourfoldInvariants:
    K4: int
    K2c2: int
    chiO: int
    chi_mK: int
    rho: int
    betti: tuple[int, ...]
    h22: int
    h13: int
    b3: int
    chiT: Optional[int] = None
    delta: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "betti", tuple(int(b) for b in self.betti))
        if len(self.betti) != 9:
            raise DomainError("a fourfold has nine Betti numbers")
        if chi_anticanonical(self.K4, self.K2c2, self.chiO) != self.chi_mK:
            raise InconsistencyError(
                f"chi(-K) = {self.chi_mK} disagrees with Riemann-Roch "
                f"{chi_anticanonical(self.K4, self.K2c2, self.chiO)}"
            )
        if self.b3 != self.betti[3] or self.b3 % 2:
            raise InconsistencyError(f"b3 = {self.b3} inconsistent with Betti vector {self.betti}")
        if self.h22 != self.betti[4] - 2 * self.h13:
            raise InconsistencyError(f"h22 = {self.h22} but b4 - 2 h13 = {self.betti[4] - 2 * self.h13}")

    def to_json(self) -> dict:
        d = asdict(self)
        d["betti"] = list(self.betti)
        return d

    @classmethod
    def from_json(cls, data: dict) -> "FourfoldInvariants":
        return cls(**{f.name: data[f.name] for f in fields(cls) if f.name in data})


def blowup_update(inv: FourfoldInvariants, s: SurfaceCenterData) -> FourfoldInvariants:
    """Invariants after blowing up the surface ``s``.

    chi(T) is dropped since no update formula is available for it, and
    delta is dropped because it is not determined by these numbers.
    """
    half = s.KZS2 + s.KSKZS
    if half % 2:
        raise InconsistencyError(
            f"(K_Z|S)^2 + K_S.K_Z|S = {half} is odd for center {s.name!r}"
        )
    K4 = inv.K4 - 3 * s.KZS2 - 2 * s.KSKZS + s.c2N - s.KS2
    K2c2 = inv.K2c2 - 12 * s.chiOS + 2 * s.KS2 - 2 * s.KSKZS - 2 * s.c2N
    chi_mK = inv.chi_mK - s.chiOS - half // 2
    # H^*(X) = H^*(Z) + H^*(S)[-2] for a codimension-two center
    betti = list(inv.betti)
    for k, b in enumerate(s.betti):
        betti[k + 2] += b
    return FourfoldInvariants(
        K4=K4,
        K2c2=K2c2,
        chiO=inv.chiO,
        chi_mK=chi_mK,
        rho=inv.rho + 1,
        betti=tuple(betti),
        h22=inv.h22 + s.h11,
        h13=inv.h13 + s.h02,
        b3=inv.b3 + s.b1,
    )


def bundle_invariants(ring: BundleRing) -> FourfoldInvariants:
    """Invariants of the rank-3 bundle itself (a P^2-bundle over P^2)."""
    if ring.rank != 3:
        raise DomainError("fourfold invariants need a rank-3 bundle")
    ch = canonical_and_chern(ring)
    # Poincare polynomial (1 + t^2 + t^4)^2
    betti = (1, 0, 2, 0, 3, 0, 2, 0, 1)
    return FourfoldInvariants(
        K4=ch.K4,
        K2c2=ch.K2c2,
        chiO=1,
        chi_mK=chi_anticanonical(ch.K4, ch.K2c2, 1),
        rho=2,
        betti=betti,
        h22=3,
        h13=0,
        b3=0,
    )


def center_data_section(
    ring: BundleRing, normal_degrees: Sequence[int], name: str = "section"
) -> SurfaceCenterData:
    """Center data of a section S = P^2 with normal bundle O(n1) + O(n2).

    Adjunction gives K_Z|S = K_S - c1(N) = -(3 + n1 + n2) * line.
    """
    if ring.rank != 3:
        raise DomainError("sections of a fourfold need a rank-3 bundle")
    n1, n2 = (int(x) for x in normal_degrees)
    a = 3 + n1 + n2
    return SurfaceCenterData(
        name=name, KS2=9, chiOS=1, c2N=n1 * n2, KZS2=a * a, KSKZS=3 * a, b1=0, h11=1, h02=0
    )


def center_data_complete_intersection(
    ring: BundleRing,
    classes: Sequence[RingElement],
    h11: int,
    rational: bool = True,
    name: str = "complete intersection",
) -> SurfaceCenterData:
    """Center data of a general complete intersection S of divisors ``alpha, beta``.

    N_S = O(alpha) + O(beta) restricted to S and K_S = (K_Z + alpha + beta)|S,
    so every number is an integral over Z against [S] = alpha * beta.
    Smoothness of S is assumed. chi(O_S) = 1 and h02 = b1 = 0 hold only for a
    rational surface, which the caller must confirm with ``rational``; the
    Picard rank ``h11`` is taken from the caller as well.
    """
    if not rational:
        raise DomainError("only rational complete-intersection centers are supported")
    if ring.rank != 3:
        raise DomainError("complete-intersection centers need a rank-3 bundle")
    alpha, beta = classes
    for c in (alpha, beta):
        if c.ring != ring:
            raise DomainError("class belongs to a different ring")
        if c.degrees_present() != {1}:
            raise DomainError("complete-intersection classes must be nonzero divisor classes")
    K = canonical_and_chern(ring).K
    surf = alpha * beta
    KS = K + alpha + beta

    def pair(x: RingElement) -> int:
        v = (x * surf).integrate()
        if v.denominator != 1:
            raise InconsistencyError(f"non-integral surface pairing {v}")
        return int(v)

    return SurfaceCenterData(
        name=name,
        KS2=pair(KS * KS),
        chiOS=1,
        c2N=pair(alpha * beta),
        KZS2=pair(K * K),
        KSKZS=pair(K * KS),
        b1=0,
        h11=int(h11),
        h02=0,
    )
