"""Group gradings of orders, and construction of the universal grading.

A grading of R by a finite abelian group Gamma is a direct sum decomposition
R = sum of R_gamma with R_gamma R_delta inside R_{gamma+delta}. Only nonzero
components are stored; the support always generates Gamma.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Optional, Sequence

from . import intlin
from .abgroups import AbHom, Element, FinAbGroup, Subgroup, cyclic_product, direct_product, from_presentation, hom_from_values
from .errors import InputError, InvariantError, UnsupportedError
from .orders import (
    Order,
    RootsOfUnity,
    autopotent_span,
    components,
    is_connected,
    parse_int,
    parse_vector,
    ring_closure,
    roots_of_unity,
)


@dataclass(eq=False)
class Grading:
    order: Order
    gamma: FinAbGroup
    components: dict[Element, intlin.HnfBasis]
    trusted: bool = False

    def support(self) -> list[Element]:
        return sorted(self.components)

    def component(self, g: Element) -> Optional[intlin.HnfBasis]:
        return self.components.get(self.gamma.reduce(g))

    def rank_of(self, g: Element) -> int:
        c = self.component(g)
        return c.rank if c is not None else 0

    @cached_property
    def _stack(self):
        cols, labels = [], []
        for g in self.support():
            for b in self.components[g].basis:
                cols.append(b)
                labels.append(g)
        n = self.order.rank
        mat = intlin.columns_to_matrix(cols, n)
        if len(cols) != n:
            raise InvariantError("components do not have total rank equal to the order rank")
        return cols, labels, intlin.rational_inverse(mat)

    def decompose(self, v: Sequence[int]) -> dict[Element, tuple[int, ...]]:
        """Homogeneous components of v (nonzero ones only)."""
        cols, labels, inv = self._stack
        n = self.order.rank
        coeffs = [sum(inv[i][j] * v[j] for j in range(n)) for i in range(n)]
        out: dict[Element, list] = {}
        for c, b, g in zip(coeffs, cols, labels):
            if c:
                if c.denominator != 1:
                    raise InvariantError("component decomposition is not integral")
                acc = out.setdefault(g, [0] * n)
                for i in range(n):
                    acc[i] += int(c) * b[i]
        return {g: tuple(x) for g, x in out.items() if any(x)}

    def degree_of(self, v: Sequence[int]) -> Optional[Element]:
        parts = self.decompose(v)
        if len(parts) != 1:
            return None
        return next(iter(parts))

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma.to_json(),
            "components": [
                {"degree": [str(x) for x in g], "basis": [[str(x) for x in b] for b in self.components[g].basis]}
                for g in self.support()
            ],
            "trusted_universality": self.trusted,
        }


def grading_check(g: Grading) -> list[str]:
    """List of violated grading axioms; empty when g is a valid grading."""
    out = []
    order = g.order
    n = order.rank
    for deg_, lat in g.components.items():
        if lat.ambient_rank != n:
            out.append(f"component {list(deg_)} has the wrong ambient rank")
            return out
        if lat.rank == 0:
            out.append(f"component {list(deg_)} is zero but listed")
    total = sum(lat.rank for lat in g.components.values())
    if total != n:
        out.append(f"component ranks sum to {total}, not {n}")
    else:
        cols = [b for lat in g.components.values() for b in lat.basis]
        if abs(intlin.det(intlin.columns_to_matrix(cols, n))) != 1:
            out.append("components do not form a direct sum decomposition of the order")
    zero = g.gamma.zero()
    if zero not in g.components or not g.components[zero].contains(order.one):
        out.append("identity is not in the degree-zero component")
    for a, b in itertools.combinations_with_replacement(g.support(), 2):
        target = g.components.get(g.gamma.add(a, b))
        for x in g.components[a].basis:
            for y in g.components[b].basis:
                p = order.product(x, y)
                if any(p) and (target is None or not target.contains(p)):
                    out.append(f"product of degrees {list(a)} and {list(b)} leaves degree {list(g.gamma.add(a, b))}")
                    break
            else:
                continue
            break
    if Subgroup(g.gamma, g.support()).order != g.gamma.order:
        out.append("support does not generate the grading group")
    return out


def _normalize_support(order: Order, gamma: FinAbGroup, comps: dict, trusted: bool = False) -> Grading:
    sub = Subgroup(gamma, list(comps))
    return Grading(order, sub.abstract, {sub.coords(k): v for k, v in comps.items()}, trusted)


def pushforward(g: Grading, f: AbHom) -> Grading:
    """Grading by the subgroup of f's target generated by the image support."""
    if f.src != g.gamma:
        raise InputError("pushforward map has the wrong source")
    merged: dict[Element, list] = {}
    for d, lat in g.components.items():
        merged.setdefault(f(d), []).extend(lat.basis)
    comps = {k: intlin.hnf(v, g.order.rank) for k, v in merged.items()}
    return _normalize_support(g.order, f.tgt, comps, g.trusted)


def trivial_grading(order: Order) -> Grading:
    return Grading(order, FinAbGroup(()), {(): intlin.hnf([order.basis_vector(i) for i in range(order.rank)], order.rank)})


def universal_groupring(base_grading: Grading, order: Order) -> Grading:
    """Gamma(A) x G grading of A[G], with components A_gamma g."""
    prov = order.provenance
    if prov is None or prov.kind != "group_ring" or prov.parts[0] is not base_grading.order:
        raise InputError("order is not the group ring over the graded base")
    group = prov.group
    elems = prov.group_elements
    gamma, norm = direct_product([base_grading.gamma, group])
    n = base_grading.order.rank
    N = order.rank
    comps = {}
    for t, h in enumerate(elems):
        for d, lat in base_grading.components.items():
            vecs = []
            for b in lat.basis:
                v = [0] * N
                v[t * n:(t + 1) * n] = b
                vecs.append(v)
            comps[norm.normalize(tuple(d) + tuple(h))] = intlin.hnf(vecs, N)
    return _normalize_support(order, gamma, comps)


def universal_product(order: Order, parts: Sequence[tuple[Grading, Any]]) -> Grading:
    """Product grading by the product of the parts' groups.

    Each part is (grading of a factor, embedding of factor coordinates into
    order coordinates). Degree zero collects all degree-zero parts; a
    nonzero degree of one factor is placed in that factor's slot.
    """
    gamma, norm = direct_product([p.gamma for p, _ in parts])
    N = order.rank
    comps: dict[Element, list] = {}
    offsets = []
    off = 0
    for p, _ in parts:
        offsets.append(off)
        off += p.gamma.ngens
    total = off
    for (p, embed), off in zip(parts, offsets):
        for d, lat in p.components.items():
            raw = [0] * total
            raw[off:off + p.gamma.ngens] = d
            key = norm.normalize(raw)
            comps.setdefault(key, []).extend(embed(b) for b in lat.basis)
    return _normalize_support(order, gamma, {k: intlin.hnf(v, N) for k, v in comps.items()})


def universal_autopotent(order: Order) -> Grading:
    """Universal grading of a connected order spanned by its roots of unity.

    Start from A = Z and root-of-unity generators s_i of R. While some pair
    i < j (lexicographically first) has A s_i and A s_j not orthogonal under
    the trace pairing, adjoin s_i^{-1} s_j to A and drop s_j. The grading
    group is mu(R)/mu(A), with components A s for the surviving s.
    """
    span_ = autopotent_span(order)
    if not span_.is_full:
        raise UnsupportedError("order is not spanned by its roots of unity; supply --grading-file")
    mu = roots_of_unity(order)
    n = order.rank
    gc = intlin.matmul(order.gram(), span_.conjugation_matrix)
    seen = set()
    gens = []
    for v, _ in span_.generators:
        if v not in seen:
            seen.add(v)
            gens.append(v)
    ring = intlin.hnf([order.one], n)

    def pairing_block(lat, s):
        cols = [order.product(a, s) for a in lat.basis]
        return cols

    while True:
        blocks = [pairing_block(ring, s) for s in gens]
        right = [[intlin.matvec(gc, c) for c in blk] for blk in blocks]
        merge = None
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if any(
                    sum(x * y for x, y in zip(u, w))
                    for u in blocks[i]
                    for w in right[j]
                ):
                    merge = (i, j)
                    break
            if merge:
                break
        if merge is None:
            break
        i, j = merge
        ring = ring_closure(order, list(ring.basis) + [order.product(mu.inverse(gens[i]), gens[j])])
        del gens[j]
    inside = [a for a in mu.group.elements() if ring.contains(mu.table[a])]
    k = mu.group.ngens
    rel = [[mu.group.invariants[i] if i == t else 0 for t in range(k)] + [a[i] for a in inside] for i in range(k)]
    if k == 0:
        quotient = from_presentation([], 0)
    else:
        quotient = from_presentation(rel)
    comps = {}
    for s in gens:
        deg_ = quotient.normalize(mu.coords(s))
        if deg_ in comps:
            raise InvariantError("two orthogonal summands received the same degree")
        comps[deg_] = intlin.hnf(pairing_block(ring, s), n)
    g = Grading(order, quotient.group, comps)
    bad = grading_check(g)
    if bad:
        raise InvariantError("autopotent grading failed: " + "; ".join(bad))
    return g


def _component_embedding(comp):
    return lambda coords: list(comp.embed(coords))


def _factor_embedding(order: Order, offset: int, rank: int):
    def embed(v):
        out = [0] * order.rank
        out[offset:offset + rank] = v
        return out

    return embed


def universal_for(order: Order, trusted: Optional[Grading] = None) -> Grading:
    """The universal grading, built from the provenance where possible.

    A trusted grading is checked for the grading axioms only and flagged;
    its universality is taken on faith.
    """
    if trusted is not None:
        bad = grading_check(trusted)
        if bad:
            raise InvariantError("supplied grading is invalid: " + "; ".join(bad))
        return trusted
    if "grading" in order._cache:
        return order._cache["grading"]
    g = _universal(order)
    order._cache["grading"] = g
    return g


def _universal(order: Order) -> Grading:
    prov = order.provenance
    if prov is not None:
        if prov.kind == "int":
            return trivial_grading(order)
        if prov.kind == "group_ring" and is_connected(prov.parts[0]):
            return universal_groupring(universal_for(prov.parts[0]), order)
        if prov.kind == "product":
            parts = []
            off = 0
            for f in prov.parts:
                parts.append((universal_for(f), _factor_embedding(order, off, f.rank)))
                off += f.rank
            return universal_product(order, parts)
    if is_connected(order):
        if order.rank == 1:
            return trivial_grading(order)
        return universal_autopotent(order)
    comps = components(order)
    return universal_product(order, [(universal_for(c.order), _component_embedding(c)) for c in comps])


@dataclass(eq=False)
class DegreeMap:
    grading: Grading
    mu: RootsOfUnity
    hom: AbHom  # mu.group -> grading.gamma

    def degree(self, v: Sequence[int]) -> Element:
        return self.hom(self.mu.coords(v))


def degree_map(g: Grading, mu: RootsOfUnity) -> DegreeMap:
    """Degree of each root of unity; every root of unity is homogeneous."""
    pairs = []
    for a in mu.group.elements():
        d = g.degree_of(mu.table[a])
        if d is None:
            raise InvariantError(f"root of unity {list(mu.table[a])} is not homogeneous")
        pairs.append((a, d))
    gens = [(mu.group.basis_element(i), dict(pairs)[mu.group.basis_element(i)]) for i in range(mu.group.ngens)]
    hom = hom_from_values(mu.group, g.gamma, gens) if gens else AbHom.zero(mu.group, g.gamma)
    for a, d in pairs:
        if hom(a) != d:
            raise InvariantError("degrees of roots of unity are not additive")
    return DegreeMap(g, mu, hom)


def load_grading(order: Order, data: Any) -> Grading:
    """Parse a grading file; the result is flagged as trusted."""
    if not isinstance(data, dict) or "gamma" not in data or "components" not in data:
        raise InputError("grading file needs `gamma` and `components`")
    orders_ = [parse_int(x) for x in data["gamma"]]
    if any(o < 1 for o in orders_):
        raise InputError("grading group orders must be positive")
    gamma, norm = cyclic_product(orders_)
    comps: dict[Element, list] = {}
    for c in data["components"]:
        if not isinstance(c, dict):
            raise InputError("each component must be an object")
        d = parse_vector(c.get("degree"), len(orders_))
        basis = [parse_vector(b, order.rank) for b in c.get("basis", [])]
        key = norm.normalize(d)
        comps.setdefault(key, []).extend(basis)
    lat = {k: intlin.hnf(v, order.rank) for k, v in comps.items()}
    lat = {k: v for k, v in lat.items() if v.rank}
    g = _normalize_support(order, gamma, lat, trusted=True)
    return g


def unit_automorphism(dm: DegreeMap, f: AbHom) -> list[list[int]]:
    """Matrix of the graded ring automorphism x -> f(gamma) x for x in R_gamma.

    f: Gamma -> mu must make 1 + f a unit; otherwise InvariantError.
    """
    g = dm.grading
    order = g.order
    n = order.rank
    cols, labels, inv = g._stack
    images = [order.product(dm.mu.embed(f(lab)), b) for b, lab in zip(cols, labels)]
    mat = [[sum(images[k][i] * inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for r in mat for x in r):
        raise InvariantError("graded automorphism matrix is not integral")
    out = [[int(x) for x in r] for r in mat]
    if abs(intlin.det(out)) != 1:
        raise InvariantError("1 + f is not a unit: the graded map is not bijective")
    return out
