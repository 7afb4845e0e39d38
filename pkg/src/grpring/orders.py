"""Reduced orders given by structure constants, and what can be computed
about them: idempotents, connected components, roots of unity, the trace
pairing and the lattice spanned by autopotent elements.

An order of rank n has basis b_0..b_{n-1} with b_i b_j = sum_k mul[i][j][k] b_k
and a coordinate vector `one` for the identity. Orders built from an
expression remember how they were built (their provenance), which lets the
roots of unity and gradings be assembled from the parts.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Any, Optional, Sequence

from . import intlin, kernels, polys
from .abgroups import Element, FinAbGroup, Subgroup, cyclic_product, from_presentation
from .errors import InputError, InvariantError, UnsupportedError

Vector = tuple[int, ...]

DEFAULT_MAX_FIELDS = 16
DEFAULT_MU_CANDIDATES = 2_000_000
MU_ORDER_LIMIT = 10_000


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _common_denominator(v: Sequence[Fraction]) -> int:
    den = 1
    for x in v:
        if isinstance(x, Fraction):
            den = _lcm(den, x.denominator)
    return den


@dataclass
class Provenance:
    kind: str  # int, atom, group_ring, product, span, subring, component
    parts: tuple = ()
    group: Optional[FinAbGroup] = None
    group_elements: tuple = ()
    mu_gens: Optional[tuple] = None
    lattice: Optional[intlin.HnfBasis] = None
    idempotent: Optional[tuple] = None


class Order:
    def __init__(self, mul: Sequence, one: Sequence[int], provenance: Optional[Provenance] = None):
        n = len(one)
        if n == 0:
            raise InputError("order must have positive rank")
        if len(mul) != n or any(len(r) != n for r in mul) or any(len(c) != n for r in mul for c in r):
            raise InputError("structure tensor shape does not match the rank")
        self.rank = n
        self.mul = tuple(tuple(tuple(int(v) for v in c) for c in r) for r in mul)
        self.one = tuple(int(v) for v in one)
        self.provenance = provenance
        self._table = tuple(
            tuple((k, v) for k, v in enumerate(self.mul[i][j]) if v) for i in range(n) for j in range(n)
        )
        self._cache: dict[str, Any] = {}

    # -- arithmetic --

    def product(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        return tuple(kernels.order_mul(self._table, self.rank, list(x), list(y)))

    def product_q(self, x: Sequence, y: Sequence) -> list[Fraction]:
        dx, dy = _common_denominator(x), _common_denominator(y)
        xi = [int(v * dx) for v in x]
        yi = [int(v * dy) for v in y]
        out = kernels.order_mul(self._table, self.rank, xi, yi)
        den = dx * dy
        return [Fraction(v, den) for v in out]

    def power(self, x: Sequence[int], k: int) -> Vector:
        out = self.one
        base = tuple(x)
        while k:
            if k & 1:
                out = self.product(out, base)
            base = self.product(base, base)
            k >>= 1
        return out

    def basis_vector(self, i: int) -> Vector:
        return tuple(int(j == i) for j in range(self.rank))

    def zero(self) -> Vector:
        return (0,) * self.rank

    @cached_property
    def trace_vector(self) -> tuple[int, ...]:
        n = self.rank
        return tuple(sum(self.mul[m][k][k] for k in range(n)) for m in range(n))

    def trace(self, x: Sequence) -> Any:
        return sum(a * t for a, t in zip(x, self.trace_vector))

    def gram(self) -> list[list[int]]:
        n = self.rank
        tv = self.trace_vector
        return [[sum(c * t for c, t in zip(self.mul[i][j], tv)) for j in range(n)] for i in range(n)]

    @cached_property
    def gram_det(self) -> int:
        return intlin.det(self.gram())

    def is_reduced(self) -> bool:
        return self.gram_det != 0

    def mult_matrix(self, x: Sequence[int]) -> list[list[int]]:
        cols = [self.product(x, self.basis_vector(k)) for k in range(self.rank)]
        return intlin.columns_to_matrix(cols, self.rank)

    # -- validation --

    def check_axioms(self) -> None:
        n = self.rank
        for i in range(n):
            for j in range(n):
                if self.mul[i][j] != self.mul[j][i]:
                    raise InputError(f"multiplication is not commutative at ({i},{j})")
        for i in range(n):
            if self.product(self.one, self.basis_vector(i)) != self.basis_vector(i):
                raise InputError("`one` is not a multiplicative identity")
        for i in range(n):
            for j in range(i, n):
                bij = self.mul[i][j]
                for k in range(n):
                    left = self.product(bij, self.basis_vector(k))
                    right = self.product(self.basis_vector(i), self.mul[j][k])
                    if left != right:
                        raise InputError(f"multiplication is not associative at ({i},{j},{k})")

    def to_json(self) -> dict:
        return {
            "kind": "atom",
            "rank": str(self.rank),
            "mul": [[[str(v) for v in c] for c in r] for r in self.mul],
            "one": [str(v) for v in self.one],
        }


# --- expressions ---------------------------------------------------------------

_INT_RE = re.compile(r"^-?[0-9]+$")


def parse_int(v: Any) -> int:
    if isinstance(v, bool):
        raise InputError(f"expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str) and _INT_RE.match(v.strip()):
        return int(v.strip())
    raise InputError(f"expected an integer or base-10 string, got {v!r}")


def parse_vector(v: Any, n: Optional[int] = None) -> Vector:
    if not isinstance(v, list):
        raise InputError(f"expected a list of integers, got {v!r}")
    out = tuple(parse_int(x) for x in v)
    if n is not None and len(out) != n:
        raise InputError(f"expected a vector of length {n}, got length {len(out)}")
    return out


def int_order() -> Order:
    return Order([[[1]]], [1], Provenance("int"))


def atom(mul: Sequence, one: Sequence[int], mu_gens: Optional[Sequence[Sequence[int]]] = None) -> Order:
    o = Order(mul, one)
    o.check_axioms()
    gens = None
    if mu_gens is not None:
        gens = tuple(tuple(int(v) for v in g) for g in mu_gens)
        for g in gens:
            if len(g) != o.rank:
                raise InputError("declared root of unity has the wrong length")
    o.provenance = Provenance("atom", mu_gens=gens)
    return o


def group_ring(base: Order, group: FinAbGroup) -> Order:
    """base[group] with basis b_i g, indexed g_index * rank + i.

    Group elements are ordered lexicographically by normalized coordinates.
    """
    elems = tuple(group.elements())
    index = {g: t for t, g in enumerate(elems)}
    n = base.rank
    size = len(elems)
    N = n * size
    mul = [[[0] * N for _ in range(N)] for _ in range(N)]
    for a, ga in enumerate(elems):
        for b, gb in enumerate(elems):
            c = index[group.add(ga, gb)]
            for i in range(n):
                for j in range(n):
                    row = mul[a * n + i][b * n + j]
                    for k, v in enumerate(base.mul[i][j]):
                        if v:
                            row[c * n + k] = v
    one = [0] * N
    z = index[group.zero()]
    for i in range(n):
        one[z * n + i] = base.one[i]
    return Order(mul, one, Provenance("group_ring", parts=(base,), group=group, group_elements=elems))


def product(factors: Sequence[Order]) -> Order:
    if not factors:
        raise InputError("product of no factors")
    N = sum(f.rank for f in factors)
    mul = [[[0] * N for _ in range(N)] for _ in range(N)]
    one = []
    off = 0
    for f in factors:
        n = f.rank
        for i in range(n):
            for j in range(n):
                for k, v in enumerate(f.mul[i][j]):
                    mul[off + i][off + j][off + k] = v
        one.extend(f.one)
        off += n
    return Order(mul, one, Provenance("product", parts=tuple(factors)))


def ring_closure(order: Order, gens: Sequence[Sequence[int]]) -> intlin.HnfBasis:
    """Smallest subring containing gens (and 1), as a lattice."""
    lat = intlin.hnf([list(g) for g in gens] + [list(order.one)], order.rank)
    while True:
        prods = [order.product(a, b) for a, b in itertools.combinations_with_replacement(lat.basis, 2)]
        new = intlin.hnf(list(lat.basis) + prods, order.rank)
        if new == lat:
            return lat
        lat = new


def subring_order(ambient: Order, lattice: intlin.HnfBasis, kind: str = "subring") -> Order:
    """The subring spanned by lattice as a standalone order in the HNF basis."""
    basis = lattice.basis
    n = len(basis)
    mul = []
    for i in range(n):
        row = []
        for j in range(n):
            c = lattice.coords(ambient.product(basis[i], basis[j]))
            if c is None:
                raise InputError("lattice is not closed under multiplication")
            row.append(c)
        mul.append(row)
    one = lattice.coords(ambient.one)
    if one is None:
        raise InputError("lattice does not contain the identity")
    return Order(mul, one, Provenance(kind, parts=(ambient,), lattice=lattice))


def span(ambient: Order, gens: Sequence[Sequence[int]]) -> Order:
    for g in gens:
        if len(g) != ambient.rank:
            raise InputError("span generator has the wrong length")
    lat = ring_closure(ambient, gens)
    if lat.rank != ambient.rank:
        raise InputError("span does not have full rank in its ambient order")
    return subring_order(ambient, lat, kind="span")


def build(expr: Any, check_reduced: bool = True) -> Order:
    """Build an order from an expression tree (parsed JSON)."""
    o = _build(expr)
    if check_reduced and not o.is_reduced():
        raise InputError("order is not reduced (trace form is degenerate)")
    return o


def _build(expr: Any) -> Order:
    if not isinstance(expr, dict) or "kind" not in expr:
        raise InputError("order expression must be an object with a `kind`")
    kind = expr["kind"]
    if kind == "int":
        return int_order()
    if kind == "atom":
        n = parse_int(expr.get("rank"))
        mul = expr.get("mul")
        if not isinstance(mul, list) or len(mul) != n:
            raise InputError("atom `mul` must be an n x n x n array")
        tensor = [[parse_vector(c, n) for c in _as_list(row, n)] for row in mul]
        one = parse_vector(expr.get("one"), n)
        mu_gens = expr.get("mu_gens")
        gens = [parse_vector(g, n) for g in mu_gens] if mu_gens is not None else None
        return atom(tensor, one, gens)
    if kind == "group_ring":
        base = _build(expr.get("base"))
        g = expr.get("group")
        if not isinstance(g, list):
            raise InputError("group_ring `group` must be a list of cyclic orders")
        orders = [parse_int(d) for d in g]
        if any(d < 1 for d in orders):
            raise InputError("cyclic orders must be positive")
        return group_ring(base, cyclic_product(orders)[0])
    if kind == "product":
        fs = expr.get("factors")
        if not isinstance(fs, list) or not fs:
            raise InputError("product needs a nonempty `factors` list")
        return product([_build(f) for f in fs])
    if kind == "span":
        amb = _build(expr.get("ambient"))
        gens = expr.get("gens")
        if not isinstance(gens, list):
            raise InputError("span needs a `gens` list")
        return span(amb, [parse_vector(v, amb.rank) for v in gens])
    raise InputError(f"unknown order expression kind {kind!r}")


def _as_list(v, n):
    if not isinstance(v, list) or len(v) != n:
        raise InputError("atom `mul` must be an n x n x n array")
    return v


# --- splitting the rational algebra ------------------------------------------


class Splitting:
    """R (x) Q as a product of number fields Q[X]/(p_k), via a primitive
    element x: R (x) Q = Q[X]/(m) with m the minimal polynomial of x."""

    def __init__(self, order: Order, max_degree: int = polys.DEFAULT_MAX_DEGREE):
        self.order = order
        n = order.rank
        self.prim, self.minpoly, powers = self._primitive(order)
        self.factors = polys.factor(self.minpoly, max_degree)
        self.pbasis = powers  # x^0..x^{n-1} as rational vectors
        pmat = [[powers[j][i] for j in range(n)] for i in range(n)]
        self.pinv = intlin.rational_inverse(pmat)
        self.fields = [polys.NumberField(p) for p in self.factors]
        self.crt: list[polys.Poly] = []
        for k, p in enumerate(self.factors):
            others = [Fraction(1)]
            for j, q in enumerate(self.factors):
                if j != k:
                    others = polys.mul(others, q)
            inv = polys.inverse_mod(polys.mod(others, p), p)
            self.crt.append(polys.mod(polys.mul(others, inv), self.minpoly))
        self.idempotents = [self.from_poly(e) for e in self.crt]

    @staticmethod
    def _primitive(order: Order):
        n = order.rank
        for t in range(1, 4 * n + 8):
            x = [Fraction(t**i) for i in range(n)]
            ech = intlin.RationalEchelon(n)
            powers = []
            cur = [Fraction(v) for v in order.one]
            while ech.add(cur):
                powers.append(cur)
                cur = order.product_q(cur, x)
            if len(powers) == n:
                coeffs = intlin.rational_solve([[p[i] for p in powers] for i in range(n)], cur)
                m = polys.norm([-c for c in coeffs] + [Fraction(1)])
                if not polys.is_squarefree(m):
                    raise InputError("order is not reduced (nilpotent elements present)")
                return x, m, powers
        raise UnsupportedError("no primitive element found for the rational algebra")

    def to_poly(self, v: Sequence) -> polys.Poly:
        n = self.order.rank
        return polys.norm([sum(self.pinv[i][j] * v[j] for j in range(n)) for i in range(n)])

    def from_poly(self, a: polys.Poly) -> list[Fraction]:
        a = polys.mod(a, self.minpoly)
        n = self.order.rank
        out = [Fraction(0)] * n
        for j, c in enumerate(a):
            if c:
                pj = self.pbasis[j]
                for i in range(n):
                    out[i] += c * pj[i]
        return out

    def field_element(self, k: int, v: Sequence) -> polys.Poly:
        return polys.mod(self.to_poly(v), self.factors[k])

    def embed_field(self, k: int, a: polys.Poly) -> list[Fraction]:
        """Element of R (x) Q equal to a in field k and 0 elsewhere."""
        return self.from_poly(polys.mul(self.crt[k], a))


def splitting(order: Order) -> Splitting:
    if "splitting" not in order._cache:
        order._cache["splitting"] = Splitting(order)
    return order._cache["splitting"]


def _integral(v: Sequence[Fraction]) -> Optional[Vector]:
    if all(x.denominator == 1 for x in v):
        return tuple(int(x) for x in v)
    return None


def idempotents(order: Order, max_fields: int = DEFAULT_MAX_FIELDS) -> list[Vector]:
    """All idempotents of the order, sorted, as integral subset sums of the
    primitive idempotents of R (x) Q."""
    key = "idempotents"
    if key in order._cache:
        return order._cache[key]
    sp = splitting(order)
    m = len(sp.factors)
    if m > max_fields:
        raise UnsupportedError(f"{m} rational components exceed the bound {max_fields}")
    found = []
    for mask in range(1 << m):
        v = [Fraction(0)] * order.rank
        for k in range(m):
            if mask >> k & 1:
                v = [a + b for a, b in zip(v, sp.idempotents[k])]
        iv = _integral(v)
        if iv is not None:
            found.append((mask, iv))
    order._cache["idempotent_masks"] = found
    out = sorted(v for _, v in found)
    order._cache[key] = out
    return out


def primitive_idempotents(order: Order) -> list[Vector]:
    idempotents(order)
    masks = order._cache["idempotent_masks"]
    nonzero = [(mk, v) for mk, v in masks if mk]
    prim = [v for mk, v in nonzero if not any(o != mk and (o & mk) == o for o, _ in nonzero)]
    return sorted(prim, reverse=True)


def is_connected(order: Order) -> bool:
    prov = order.provenance
    if prov is not None:
        if prov.kind in ("int", "component"):
            return True
        if prov.kind == "group_ring":
            return is_connected(prov.parts[0])
        if prov.kind == "product" and len(prov.parts) > 1:
            return False
        if prov.kind == "product":
            return is_connected(prov.parts[0])
    return len(primitive_idempotents(order)) == 1


@dataclass
class Component:
    """Connected component e R of an order, with e a primitive idempotent."""

    parent: Order
    idempotent: Vector
    lattice: intlin.HnfBasis
    order: Order

    def embed(self, coords: Sequence[int]) -> Vector:
        return tuple(self.lattice.combine(coords))

    def project(self, v: Sequence[int]) -> Vector:
        c = self.lattice.coords(self.parent.product(self.idempotent, v))
        if c is None:
            raise InvariantError("projection left the component")
        return tuple(c)


def components(order: Order) -> list[Component]:
    if "components" in order._cache:
        return order._cache["components"]
    out = []
    for e in primitive_idempotents(order):
        lat = intlin.hnf([order.product(e, order.basis_vector(i)) for i in range(order.rank)], order.rank)
        comp = subring_order_with_identity(order, lat, e)
        out.append(Component(order, e, lat, comp))
    order._cache["components"] = out
    return out


def subring_order_with_identity(ambient: Order, lattice: intlin.HnfBasis, e: Vector) -> Order:
    basis = lattice.basis
    n = len(basis)
    mul = [[lattice.coords(ambient.product(basis[i], basis[j])) for j in range(n)] for i in range(n)]
    one = lattice.coords(e)
    if one is None or any(c is None for r in mul for c in r):
        raise InvariantError("component lattice is not a ring")
    return Order(mul, one, Provenance("component", parts=(ambient,), lattice=lattice, idempotent=tuple(e)))


# --- roots of unity --------------------------------------------------------------


class RootsOfUnity:
    """mu(R) as an abstract group with its embedding into R."""

    def __init__(self, order: Order, group: FinAbGroup, table: dict[Element, Vector], source: str):
        self.order = order
        self.group = group
        self.table = table
        self.index = {v: a for a, v in table.items()}
        self.source = source
        if len(self.index) != len(table) or len(table) != group.order:
            raise InvariantError("roots of unity table is not a bijection")

    @property
    def size(self) -> int:
        return self.group.order

    def embed(self, a: Sequence[int]) -> Vector:
        return self.table[self.group.reduce(a)]

    def coords(self, v: Sequence[int]) -> Optional[Element]:
        return self.index.get(tuple(v))

    def gens(self) -> list[Vector]:
        return [self.embed(self.group.basis_element(i)) for i in range(self.group.ngens)]

    def inverse(self, v: Sequence[int]) -> Vector:
        return self.embed(self.group.neg(self.coords(v)))

    def elements(self) -> list[Vector]:
        return [self.table[a] for a in self.group.elements()]

    @classmethod
    def from_generators(cls, order: Order, gens: Sequence[Sequence[int]], source: str) -> "RootsOfUnity":
        orders = []
        powers = []
        for g in gens:
            g = tuple(g)
            pw = [order.one]
            cur = g
            while cur != order.one:
                pw.append(cur)
                if len(pw) > MU_ORDER_LIMIT:
                    raise InvariantError(f"element {list(g)} is not a root of unity")
                cur = order.product(cur, g)
            orders.append(len(pw))
            powers.append(pw)
        k = len(gens)
        seen: dict[Vector, tuple] = {}
        relations = [[orders[i] if i == j else 0 for i in range(k)] for j in range(k)]
        for exps in itertools.product(*(range(o) for o in orders)):
            v = order.one
            for e, pw in zip(exps, powers):
                if e:
                    v = order.product(v, pw[e])
            if v in seen:
                relations.append([a - b for a, b in zip(exps, seen[v])])
            else:
                seen[v] = exps
        if k == 0:
            group = FinAbGroup(())
            return cls(order, group, {(): order.one}, source)
        rel_matrix = [[r[i] for r in relations] for i in range(k)]
        norm = from_presentation(rel_matrix)
        group = norm.group
        table = {}
        for exps, v in ((e, v) for v, e in seen.items()):
            table[norm.normalize(exps)] = v
        return cls(order, group, table, source)


def roots_of_unity(order: Order, verify: bool = False) -> RootsOfUnity:
    """mu(R), assembled from the provenance when possible."""
    key = "mu"
    if key not in order._cache:
        order._cache[key] = _compose_mu(order)
    mu = order._cache[key]
    if verify and mu.source != "fields":
        if order.rank > 8:
            raise UnsupportedError("independent verification of mu is limited to rank 8")
        other = mu_from_fields(order)
        if other.size != mu.size or set(other.index) != set(mu.index):
            raise InvariantError("roots of unity disagree with the field computation")
    return mu


def _compose_mu(order: Order) -> RootsOfUnity:
    prov = order.provenance
    if prov is None:
        return mu_from_fields(order)
    if prov.kind == "int":
        return RootsOfUnity.from_generators(order, [(-1,)], "int")
    if prov.kind == "atom" and prov.mu_gens is not None:
        return RootsOfUnity.from_generators(order, prov.mu_gens, "declared")
    if prov.kind == "group_ring":
        base = prov.parts[0]
        if not is_connected(base):
            return mu_from_fields(order)
        bmu = roots_of_unity(base)
        n = base.rank
        elems = prov.group_elements
        idx = {g: t for t, g in enumerate(elems)}
        gens = []
        for z in bmu.gens():
            gens.append(tuple(z) + (0,) * (n * (len(elems) - 1)))
        group = prov.group
        for j in range(group.ngens):
            v = [0] * (n * len(elems))
            t = idx[group.basis_element(j)]
            for i in range(n):
                v[t * n + i] = base.one[i]
            gens.append(tuple(v))
        return RootsOfUnity.from_generators(order, gens, "group_ring")
    if prov.kind == "product":
        gens = []
        off = 0
        for f in prov.parts:
            fmu = roots_of_unity(f)
            for z in fmu.gens():
                v = list(order.one)
                v[off:off + f.rank] = z
                gens.append(tuple(v))
            off += f.rank
        return RootsOfUnity.from_generators(order, gens, "product")
    if prov.kind in ("span", "subring"):
        amb = prov.parts[0]
        amu = roots_of_unity(amb)
        lat = prov.lattice
        inside = [a for a in amu.group.elements() if lat.contains(amu.table[a])]
        sub = Subgroup(amu.group, inside)
        gens = [tuple(lat.coords(amu.embed(sub.incl.column(j)))) for j in range(sub.abstract.ngens)]
        return RootsOfUnity.from_generators(order, gens, "subring")
    if prov.kind == "component":
        # mu(eR) = e mu(R)
        amb = prov.parts[0]
        gens = [tuple(prov.lattice.coords(amb.product(prov.idempotent, z))) for z in roots_of_unity(amb).gens()]
        return RootsOfUnity.from_generators(order, gens, "component")
    return mu_from_fields(order)


def field_roots_of_unity(field: polys.NumberField) -> tuple[int, polys.Poly]:
    """(w, zeta) with zeta generating the w roots of unity of the field."""
    d = field.degree
    minus_one = [Fraction(-1)]
    if d == 1:
        return 2, minus_one
    if d == 2:
        c0, c1 = field.p[0], field.p[1]
        disc = c1 * c1 - 4 * c0  # root = (-c1 + sqrt(disc)) / 2
        sqrt_d = [c1, Fraction(2)]  # 2X + c1 squares to disc
        for target, w in ((Fraction(-1), 4), (Fraction(-3), 6)):
            ratio = disc / target
            k = _rational_sqrt(ratio)
            if k is not None:
                s = polys.scale(sqrt_d, 1 / k)  # sqrt(target)
                if w == 4:
                    return 4, field.reduce(s)
                return 6, field.reduce(polys.scale(polys.add([Fraction(1)], s), Fraction(1, 2)))
        return 2, minus_one
    w = 1
    zeta = [Fraction(1)]
    for ell in _primes_up_to(d + 1):
        best = None
        k = 1
        while d % polys.euler_phi(ell**k) == 0:
            q = ell**k
            if q == 2:
                best = (2, minus_one)
            else:
                roots = field.roots(polys.cyclotomic(q))
                if not roots:
                    break
                best = (q, roots[0])
            k += 1
        if best is not None:
            w *= best[0]
            zeta = field.mul(zeta, best[1])
    return w, zeta


def _primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, int(p**0.5) + 1))]


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x <= 0:
        return None
    from math import isqrt

    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def mu_from_fields(order: Order, max_candidates: int = DEFAULT_MU_CANDIDATES) -> RootsOfUnity:
    """mu(R) from the roots of unity of the fields of R (x) Q.

    Tuples of field roots of unity are kept when they lie in R; the search
    meets in the middle on residues modulo a common denominator.
    """
    sp = splitting(order)
    info = [field_roots_of_unity(f) for f in sp.fields]
    ws = [w for w, _ in info]
    total = 1
    for w in ws:
        total *= w
    if total > max_candidates:
        raise UnsupportedError(f"{total} root-of-unity candidates exceed the bound {max_candidates}")
    vecs = []
    den = 1
    for k, (w, z) in enumerate(info):
        row = []
        cur = [Fraction(1)]
        for _ in range(w):
            v = sp.embed_field(k, cur)
            row.append(v)
            den = _lcm(den, _common_denominator(v))
            cur = sp.fields[k].mul(cur, z)
        vecs.append(row)
    ivecs = [[tuple(int(x * den) for x in v) for v in row] for row in vecs]
    half = len(ws) // 2

    def sums(idx):
        out: dict = {}
        for exps in itertools.product(*(range(ws[k]) for k in idx)):
            s = [0] * order.rank
            for k, e in zip(idx, exps):
                for i, x in enumerate(ivecs[k][e]):
                    s[i] += x
            out.setdefault(tuple(x % den for x in s), []).append((exps, s))
        return out

    left_idx, right_idx = list(range(half)), list(range(half, len(ws)))
    left = sums(left_idx)
    found = {}
    for key, entries in sums(right_idx).items():
        need = tuple((-x) % den for x in key)
        for le, ls in left.get(need, []):
            for re_, rs in entries:
                vec = tuple((a + b) // den for a, b in zip(ls, rs))
                found[tuple(le) + tuple(re_)] = vec
    par, norm = cyclic_product(ws)
    sub = Subgroup(par, [norm.normalize(e) for e in found])
    table = {}
    for a in sub.abstract.elements():
        raw = tuple(x % w for x, w in zip(norm.lift(sub.incl(a)), ws)) if ws else ()
        if raw not in found:
            raise InvariantError("roots of unity do not form a group")
        table[a] = found[raw]
    return RootsOfUnity(order, sub.abstract, table, "fields")


# --- trace pairing and autopotents ---------------------------------------------------


@dataclass
class AutopotentSpan:
    """Z-span of the autopotent elements e*zeta (e idempotent, zeta in mu)."""

    order: Order
    generators: list[tuple[Vector, Vector]]  # (element, its conjugate)
    lattice: intlin.HnfBasis

    @property
    def is_full(self) -> bool:
        return self.lattice.is_full()

    @cached_property
    def _rational_basis(self):
        ech = intlin.RationalEchelon(self.order.rank)
        chosen = []
        for v, c in self.generators:
            if ech.add(v):
                chosen.append((v, c))
        return chosen

    def conjugate(self, y: Sequence[int]) -> list[Fraction]:
        """Complex conjugate of y, for y in the rational span of autopotents."""
        basis = self._rational_basis
        a = [[v[i] for v, _ in basis] for i in range(self.order.rank)]
        coeffs = intlin.rational_solve(a, list(y))
        if coeffs is None:
            raise InputError("element is not in the span of the autopotents")
        out = [Fraction(0)] * self.order.rank
        for q, (_, c) in zip(coeffs, basis):
            if q:
                for i in range(self.order.rank):
                    out[i] += q * c[i]
        return out

    @cached_property
    def conjugation_matrix(self) -> list[list[int]]:
        """Conjugation on R as an integer matrix; needs full rational rank."""
        n = self.order.rank
        if len(self._rational_basis) < n:
            raise UnsupportedError("autopotents do not span the order rationally")
        cols = [self.conjugate(self.order.basis_vector(i)) for i in range(n)]
        mat = [[cols[j][i] for j in range(n)] for i in range(n)]
        if any(x.denominator != 1 for r in mat for x in r):
            raise InvariantError("conjugation is not integral")
        return [[int(x) for x in r] for r in mat]


def subalgebra_basis(order: Order, gens: Sequence[tuple[Vector, Vector]], unit: tuple[Vector, Vector]) -> list[tuple[Vector, Vector]]:
    """Rational basis of the algebra generated by gens, made of products.

    Elements travel with their conjugates; unit is the identity of the
    algebra (an idempotent, self-conjugate).
    """
    ech = intlin.RationalEchelon(order.rank)
    basis = [unit]
    ech.add(unit[0])
    frontier = [unit]
    while frontier:
        nxt = []
        for z, zc in frontier:
            for g, gc in gens:
                v = order.product(z, g)
                if ech.add(v):
                    item = (v, order.product(zc, gc))
                    basis.append(item)
                    nxt.append(item)
        frontier = nxt
    return basis


def autopotent_span(order: Order) -> AutopotentSpan:
    if "autopotent_span" in order._cache:
        return order._cache["autopotent_span"]
    mu = roots_of_unity(order)
    xs = [(g, mu.inverse(g)) for g in mu.gens()]
    gens_out: list[tuple[Vector, Vector]] = []
    for e in primitive_idempotents(order) if not is_connected(order) else [order.one]:
        local = [(order.product(e, g), order.product(e, gi)) for g, gi in xs]
        ys = subalgebra_basis(order, local, (e, e))
        lat = intlin.hnf([y for y, _ in ys], order.rank)
        changed = True
        while changed:
            changed = False
            for y, yc in list(ys):
                for g, gc in local:
                    v = order.product(y, g)
                    if not lat.contains(v):
                        ys.append((v, order.product(yc, gc)))
                        lat = intlin.hnf(list(lat.basis) + [v], order.rank)
                        changed = True
        gens_out.extend(ys)
    lattice = intlin.hnf([g for g, _ in gens_out], order.rank)
    out = AutopotentSpan(order, gens_out, lattice)
    order._cache["autopotent_span"] = out
    return out


def trace_pairing(order: Order, x: Sequence[int], y: Sequence[int]) -> int:
    """Trace of x times the conjugate of y; y must lie in the autopotent span."""
    conj = autopotent_span(order).conjugate(y)
    val = order.trace(order.product_q([Fraction(v) for v in x], conj))
    if val.denominator != 1:
        raise InvariantError("trace pairing is not integral")
    return int(val)


# --- subrings and unit subgroups ------------------------------------------------------


@dataclass(frozen=True)
class Subring:
    order: Order
    lattice: intlin.HnfBasis

    def contains(self, v) -> bool:
        return self.lattice.contains(v)


def subring_from_gens(order: Order, gens: Sequence[Sequence[int]]) -> Subring:
    return Subring(order, ring_closure(order, gens))


def subring_from_basis(order: Order, vectors: Sequence[Sequence[int]]) -> Subring:
    """Subring with the given additive span; closure and 1 are checked."""
    lat = intlin.hnf([list(v) for v in vectors], order.rank)
    if not lat.contains(order.one):
        raise InputError("subring does not contain 1")
    for a in lat.basis:
        for b in lat.basis:
            if not lat.contains(order.product(a, b)):
                raise InputError("subring is not closed under multiplication")
    return Subring(order, lat)


@dataclass(eq=False)
class UnitSubgroup:
    mu: RootsOfUnity
    sub: Subgroup

    @classmethod
    def from_vectors(cls, mu: RootsOfUnity, vectors: Sequence[Sequence[int]]) -> "UnitSubgroup":
        coords = []
        for v in vectors:
            c = mu.coords(v)
            if c is None:
                raise InputError(f"{list(v)} is not a root of unity of the order")
            coords.append(c)
        return cls(mu, Subgroup(mu.group, coords))

    @property
    def order(self) -> int:
        return self.sub.order

    def vectors(self) -> list[Vector]:
        return sorted(self.mu.embed(a) for a in self.sub.elements())

    def gen_vectors(self) -> list[Vector]:
        return [self.mu.embed(self.sub.incl.column(j)) for j in range(self.sub.abstract.ngens)]

    def __eq__(self, other):
        return isinstance(other, UnitSubgroup) and self.sub == other.sub

    def __hash__(self):
        return hash(self.sub)


def fingerprint(order: Order) -> dict:
    """Isomorphism invariants used to compare orders."""
    from .gradings import universal_for

    mu = roots_of_unity(order)
    g = universal_for(order)
    return {
        "rank": order.rank,
        "gram_det": order.gram_det,
        "mu": mu.size,
        "gamma": g.gamma.invariants,
    }
