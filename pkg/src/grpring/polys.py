"""Dense univariate polynomials over Q (lists of Fractions, lowest degree
first) and factorization into monic irreducibles.

Factorization removes cyclotomic factors by trial division and settles
degrees up to 3 by rational roots; anything left goes to sympy.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .errors import InvariantError, UnsupportedError

Poly = list  # list[Fraction], lowest degree first, no trailing zeros

DEFAULT_MAX_DEGREE = 24


def norm(p: Sequence) -> Poly:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return out


def deg(p: Poly) -> int:
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return norm([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, [-c for c in q])


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return norm(out)


def scale(p: Poly, c) -> Poly:
    return norm([a * c for a in p])


def divmod_(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = deg(q)
    lead = q[-1]
    quo = [Fraction(0)] * max(0, len(p) - dq)
    while r and deg(r) >= dq:
        c = r[-1] / lead
        shift = deg(r) - dq
        quo[shift] = c
        for i, b in enumerate(q):
            r[shift + i] -= c * b
        r = norm(r)
    return norm(quo), r


def mod(p: Poly, q: Poly) -> Poly:
    return divmod_(p, q)[1]


def monic(p: Poly) -> Poly:
    return scale(p, 1 / p[-1]) if p else []


def pgcd(p: Poly, q: Poly) -> Poly:
    a, b = norm(p), norm(q)
    while b:
        a, b = b, mod(a, b)
    return monic(a)


def ext_gcd(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, s, t) with s p + t q = g monic."""
    r0, r1 = norm(p), norm(q)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        qq, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(qq, s1))
        t0, t1 = t1, sub(t0, mul(qq, t1))
    c = 1 / r0[-1]
    return scale(r0, c), scale(s0, c), scale(t0, c)


def inverse_mod(a: Poly, m: Poly) -> Poly:
    g, s, _ = ext_gcd(a, m)
    if g != [1]:
        raise InvariantError("polynomial is not invertible modulo the modulus")
    return mod(s, m)


def deriv(p: Poly) -> Poly:
    return norm([i * c for i, c in enumerate(p)][1:])


def is_squarefree(p: Poly) -> bool:
    return deg(pgcd(p, deriv(p))) == 0


def evaluate(p: Poly, x):
    out = Fraction(0)
    for c in reversed(p):
        out = out * x + c
    return out


def compose_linear_shift(p: Poly, s) -> Poly:
    """p(Y + s) as a polynomial in Y."""
    out: Poly = []
    for c in reversed(p):
        out = add(mul(out, [Fraction(s), Fraction(1)]), [c])
    return out


def euler_phi(n: int) -> int:
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> tuple:
    num = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]
    for d in range(1, m):
        if m % d == 0:
            num, r = divmod_(num, list(_cyclotomic(d)))
            assert not r
    return tuple(num)


def cyclotomic(m: int) -> Poly:
    return list(_cyclotomic(m))


def cyclotomic_indices(max_phi: int) -> list[int]:
    """All m with phi(m) <= max_phi (phi(m) >= sqrt(m/2) bounds the search)."""
    return [m for m in range(1, 2 * max_phi * max_phi + 3) if euler_phi(m) <= max_phi]


def _primitive_integer(p: Poly) -> list[int]:
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def _rational_root(p: Poly):
    """Some rational root of p, or None."""
    if p[0] == 0:
        return Fraction(0)
    ints = _primitive_integer(p)
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n):
        return [d for d in range(1, n + 1) if n % d == 0]

    if a0 > 10**6 or an > 10**6:
        return None
    for q in divisors(an):
        for r in divisors(a0):
            for cand in (Fraction(r, q), Fraction(-r, q)):
                if evaluate(p, cand) == 0:
                    return cand
    return None


def factor(p: Poly, max_degree: int = DEFAULT_MAX_DEGREE) -> list[Poly]:
    """Monic irreducible factors of a squarefree p, in a deterministic order."""
    p = monic(norm(p))
    if deg(p) > max_degree:
        raise UnsupportedError(f"polynomial degree {deg(p)} exceeds the factorization bound {max_degree}")
    if not is_squarefree(p):
        raise InvariantError("polynomial to factor is not squarefree")
    found: list[Poly] = []
    rest = p
    for m in cyclotomic_indices(deg(p)):
        if deg(rest) < euler_phi(m):
            continue
        phi_m = cyclotomic(m)
        q, r = divmod_(rest, phi_m)
        if not r:
            found.append(phi_m)
            rest = q
    pending = [rest] if deg(rest) > 0 else []
    while pending:
        f = pending.pop()
        if deg(f) == 1:
            found.append(monic(f))
            continue
        root = _rational_root(f)
        if root is not None:
            found.append([-root, Fraction(1)])
            q = divmod_(f, [-root, Fraction(1)])[0]
            if deg(q) > 0:
                pending.append(q)
            continue
        if deg(f) <= 3:
            found.append(monic(f))
            continue
        found.extend(_sympy_factor(f))
    found.sort(key=lambda f: (deg(f), [(c.numerator, c.denominator) for c in f]))
    return found


def _sympy_factor(f: Poly) -> list[Poly]:
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(f))
    _, facs = sympy.factor_list(expr, x)
    out = []
    for g, mult in facs:
        coeffs = sympy.Poly(g, x).all_coeffs()[::-1]
        gp = monic(norm([Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in coeffs]))
        if deg(gp) > 0:
            out.extend([gp] * mult)
    return out


# --- number fields Q[X]/(p) ----------------------------------------------------


class NumberField:
    """Q[X]/(p) for monic irreducible p; elements are reduced polynomials."""

    def __init__(self, p: Poly):
        self.p = monic(norm(p))
        self.degree = deg(self.p)

    def reduce(self, a: Poly) -> Poly:
        return mod(norm(a), self.p)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return mod(mul(a, b), self.p)

    def inv(self, a: Poly) -> Poly:
        return inverse_mod(a, self.p)

    def power(self, a: Poly, k: int) -> Poly:
        out = [Fraction(1)]
        base = self.reduce(a)
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def poly_gcd(self, f: list, g: list) -> list:
        """gcd in K[Y]; polynomials are lists of field elements, low first."""

        def strip(h):
            h = list(h)
            while h and not h[-1]:
                h.pop()
            return h

        def pmod(a, b):
            a = strip(a)
            inv_lead = self.inv(b[-1])
            while a and len(a) >= len(b):
                c = self.mul(a[-1], inv_lead)
                shift = len(a) - len(b)
                for i, bc in enumerate(b):
                    a[shift + i] = sub(a[shift + i], self.mul(c, bc))
                a = strip(a)
            return a

        a, b = strip(f), strip(g)
        while b:
            a, b = b, pmod(a, b)
        inv_lead = self.inv(a[-1])
        return [self.mul(c, inv_lead) for c in a]

    def roots(self, g: Poly) -> list[Poly]:
        """Roots in this field of a squarefree g in Q[Y], by the norm method."""
        import sympy

        x, y = sympy.symbols("x y")
        d = self.degree

        def to_expr(poly, var):
            return sum(sympy.Rational(c.numerator, c.denominator) * var**i for i, c in enumerate(poly))

        p_expr = to_expr(self.p, x)
        for s in range(0, 50):
            g_shift = to_expr(g, y - s * x)
            n_expr = sympy.resultant(p_expr, g_shift, x)
            n_poly = sympy.Poly(n_expr, y)
            if sympy.degree(sympy.gcd(n_poly, n_poly.diff(y)), y) == 0:
                break
        else:
            raise UnsupportedError("no separating shift found for the norm method")
        _, facs = sympy.factor_list(n_poly.as_expr(), y)
        out = []
        for fac, _ in facs:
            fp = sympy.Poly(fac, y)
            if fp.degree() != d:
                continue
            coeffs = [Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in fp.all_coeffs()[::-1]]
            # fac(Y + s X) with coefficients in K
            shifted: list = [[]]
            for c in reversed(coeffs):
                # shifted = shifted * (Y + sX) + c
                nxt = [[] for _ in range(len(shifted) + 1)]
                for i, a in enumerate(shifted):
                    nxt[i + 1] = add(nxt[i + 1], a)
                    nxt[i] = add(nxt[i], self.mul(a, [Fraction(0), Fraction(s)]))
                nxt[0] = add(nxt[0], [c])
                shifted = nxt
            gk = [[c] if c else [] for c in g]
            h = self.poly_gcd(gk, shifted)
            if len(h) == 2:
                out.append(self.reduce([-c for c in h[0]]))
        return out
