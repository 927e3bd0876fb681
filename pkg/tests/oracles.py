"""Independent oracles: closed forms and brute-force counts that share no code with fano4."""

from itertools import product
from math import comb

import sympy


def monomial_count(nvars: int, degree: int) -> int:
    """h^0(P^(nvars-1), O(degree)) by enumerating exponent vectors."""
    return sum(1 for e in product(range(degree + 1), repeat=nvars) if sum(e) == degree)


def projective_space_chern_numbers(n: int) -> dict:
    """Chern numbers of P^n from c(T) = (1 + H)^(n+1) and H^n = 1."""
    c = [comb(n + 1, k) for k in range(n + 1)]
    return {"c1^4": c[1] ** 4, "c1^2c2": c[1] ** 2 * c[2], "c4": c[4]} if n == 4 else {}


def product_p2_p2_c1_4() -> int:
    """(3 h1 + 3 h2)^4 on P^2 x P^2 with h1^3 = h2^3 = 0, h1^2 h2^2 = 1."""
    h1, h2 = sympy.symbols("h1 h2")
    poly = sympy.Poly(sympy.expand((3 * h1 + 3 * h2) ** 4), h1, h2)
    return int(poly.coeff_monomial(h1**2 * h2**2))


def bundle_integral(degrees, xi_coeff, h_coeff, power):
    """Degree of (xi_coeff xi + h_coeff h)^power on P(+O(d_i)) over P^2.

    Reduces modulo the ideal (h^3, prod(xi - d_i h)) with a Groebner basis and
    reads off the coefficient of h^2 xi^(r-1).
    """
    h, x = sympy.symbols("h x")
    rel = sympy.expand(sympy.prod([x - d * h for d in degrees]))
    G = sympy.groebner([h**3, rel], x, h, order="lex")
    _, rem = G.reduce(sympy.expand((xi_coeff * x + h_coeff * h) ** power))
    r = len(degrees)
    return int(sympy.Poly(rem, x, h).coeff_monomial(x ** (r - 1) * h**2))


def betti_of_p2_bundle_over_p2():
    """Coefficients of (1 + t + t^2)^2, the even Betti numbers of a P^2-bundle over P^2."""
    t = sympy.symbols("t")
    return [int(c) for c in reversed(sympy.Poly((1 + t + t**2) ** 2, t).all_coeffs())]


def quadric_surface_center_data():
    """Quadric surface Q in P^4, N = O(1) + O(2), deg Q = 2, K_Q = -2H, K_P4|Q = -5H."""
    deg = 2
    KS = -5 + 1 + 2
    return dict(KS2=KS * KS * deg, chiOS=1, c2N=1 * 2 * deg, KZS2=25 * deg, KSKZS=(-5) * KS * deg)
