"""Decompositions R = A[G] of an order as a group ring over a subring A with
G a group of roots of unity, and the maximal ("stark") decomposition.

For a connected order with universal grading Gamma and degree map
d: mu -> Gamma, pairs (A, G) correspond to idempotents f: Gamma -> mu with
f d f = f: A is the sum of R_gamma over gamma in ker f and G is the image of f.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from . import intlin
from .abgroups import AbHom, FinAbGroup, Subgroup, group_gcd, hom_from_values, split_cyclic_summand
from .errors import InvariantError, UnsupportedError
from .gradings import DegreeMap, Grading, degree_map, unit_automorphism, universal_for
from .morphmods import (
    DEFAULT_MAX_ENUM,
    MorphDec,
    connecting_unit,
    dec_from_id0,
    has_iso_summand,
    id0_enumerate,
    max_iso_dec,
)
from .orders import (
    Order,
    RootsOfUnity,
    Subring,
    UnitSubgroup,
    components,
    is_connected,
    roots_of_unity,
    subring_order,
)


@dataclass(eq=False)
class StarkContext:
    """Universal grading, roots of unity and degree map of a connected order."""

    order: Order
    grading: Grading
    mu: RootsOfUnity
    dm: DegreeMap

    @property
    def d(self) -> AbHom:
        return self.dm.hom

    @property
    def trusted(self) -> bool:
        return self.grading.trusted


def stark_context(order: Order, trusted: Optional[Grading] = None) -> StarkContext:
    if not is_connected(order):
        raise UnsupportedError("degree map needs a connected order; split it into components first")
    g = universal_for(order, trusted)
    mu = roots_of_unity(order)
    return StarkContext(order, g, mu, degree_map(g, mu))


def is_gprg(order: Order, base: intlin.HnfBasis, group_vectors: Sequence[Sequence[int]]) -> bool:
    """Whether R = A[G]: the products a g over a basis of A and all g in G
    form a basis of R."""
    vecs = [order.product(a, g) for g in group_vectors for a in base.basis]
    if len(vecs) != order.rank:
        return False
    return abs(intlin.det(intlin.columns_to_matrix(vecs, order.rank))) == 1


@dataclass(eq=False)
class GpRgPair:
    order: Order
    base: Subring
    group: UnitSubgroup

    @cached_property
    def key(self):
        return (self.base.lattice, self.group.sub.key)

    def __eq__(self, other):
        return isinstance(other, GpRgPair) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def certificate(self) -> bool:
        return is_gprg(self.order, self.base.lattice, self.group.vectors())

    def to_json(self) -> dict:
        return {
            "base_basis": [[str(x) for x in b] for b in self.base.lattice.basis],
            "group": self.group.sub.abstract.to_json(),
            "group_generators": [[str(x) for x in v] for v in self.group.gen_vectors()],
            "group_elements": [[str(x) for x in v] for v in self.group.vectors()],
        }


def _base_lattice(ctx: StarkContext, degrees) -> intlin.HnfBasis:
    vecs = []
    for gdeg in degrees:
        lat = ctx.grading.components.get(gdeg)
        if lat is not None:
            vecs.extend(lat.basis)
    return intlin.hnf(vecs, ctx.order.rank)


def gprg_from_id0(ctx: StarkContext, f: AbHom) -> GpRgPair:
    kernel = f.kernel()
    base = _base_lattice(ctx, [g for g in ctx.grading.support() if kernel.contains(g)])
    group = UnitSubgroup(ctx.mu, f.image())
    pair = GpRgPair(ctx.order, Subring(ctx.order, base), group)
    if not pair.certificate():
        raise InvariantError("idempotent did not produce a group ring decomposition")
    return pair


def gprg_from_dec(ctx: StarkContext, dec: MorphDec) -> GpRgPair:
    base = _base_lattice(ctx, [g for g in ctx.grading.support() if dec.tgt0.contains(g)])
    pair = GpRgPair(ctx.order, Subring(ctx.order, base), UnitSubgroup(ctx.mu, dec.src1))
    if not pair.certificate():
        raise InvariantError("decomposition did not produce a group ring decomposition")
    return pair


def id0_from_gprg(ctx: StarkContext, pair: GpRgPair) -> AbHom:
    """Zero on Gamma(A) and the inverse of d on d(G)."""
    gam = ctx.grading.gamma
    d = ctx.d
    base_degrees = [
        g for g in ctx.grading.support() if pair.base.lattice.contains_lattice(ctx.grading.components[g])
    ]
    group = pair.group.sub
    pairs = [(g, ctx.mu.group.zero()) for g in base_degrees]
    pairs += [(d(x), x) for x in group.gens]
    f = hom_from_values(gam, ctx.mu.group, pairs)
    if f.compose(d).compose(f) != f:
        raise InvariantError("pair does not correspond to an idempotent")
    return f


def enumerate_gprg(ctx: StarkContext, bound: int = DEFAULT_MAX_ENUM) -> tuple[list[GpRgPair], list[tuple[int, int]]]:
    """All pairs (A, G) with R = A[G] and the covering relations of the order
    (B, H) <= (A, G) iff H is inside G and A is inside B.

    Edges (i, j) mean pairs[i] is covered by pairs[j].
    """
    if not is_connected(ctx.order):
        raise UnsupportedError("enumeration of group ring decompositions needs a connected order")
    pairs = [gprg_from_id0(ctx, f) for f in id0_enumerate(ctx.d, bound)]
    pairs.sort(key=lambda p: (p.group.order, p.group.vectors(), p.base.lattice.basis))

    def leq(p, q):
        return p.group.sub.is_subgroup_of(q.group.sub) and p.base.lattice.contains_lattice(q.base.lattice)

    n = len(pairs)
    less = [[i != j and leq(pairs[i], pairs[j]) for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if less[i][j] and not any(less[i][k] and less[k][j] for k in range(n)):
                edges.append((i, j))
    return pairs, edges


def maximal_elements(pairs: list[GpRgPair], edges: list[tuple[int, int]]) -> list[GpRgPair]:
    below = {i for i, _ in edges}
    return [p for i, p in enumerate(pairs) if i not in below]


@dataclass(eq=False)
class StarkDecomposition:
    order: Order
    base: Subring
    group: UnitSubgroup
    trusted: bool
    certificates: dict = field(default_factory=dict)

    @cached_property
    def base_order(self) -> Order:
        return subring_order(self.order, self.base.lattice)

    @property
    def group_structure(self) -> FinAbGroup:
        return self.group.sub.abstract

    def pair(self) -> GpRgPair:
        return GpRgPair(self.order, self.base, self.group)

    def to_json(self) -> dict:
        out = self.pair().to_json()
        out["stark_base"] = self.base_order.to_json()
        out["certificates"] = {k: v for k, v in self.certificates.items()}
        out["trusted_universality"] = self.trusted
        return out


def _project_grading(g: Grading, comp) -> Grading:
    from .gradings import _normalize_support

    comps = {}
    for deg_, lat in g.components.items():
        vecs = [comp.project(b) for b in lat.basis]
        plat = intlin.hnf(vecs, comp.order.rank)
        if plat.rank:
            comps[deg_] = plat
    return _normalize_support(comp.order, g.gamma, comps, g.trusted)


def _component_context(order: Order, comp, grading: Grading, mu: RootsOfUnity) -> StarkContext:
    cg = _project_grading(grading, comp)
    cmu = RootsOfUnity.from_generators(comp.order, [comp.project(z) for z in mu.gens()], "projection")
    return StarkContext(comp.order, cg, cmu, degree_map(cg, cmu))


def _connected_maximal(ctx: StarkContext) -> tuple[MorphDec, GpRgPair]:
    dec = max_iso_dec(ctx.d)
    if has_iso_summand(ctx.d, dec):
        raise InvariantError("d0 still has an isomorphism summand")
    return dec, gprg_from_dec(ctx, dec)


def _component_job(args):
    order, comp, grading, mu = args
    ctx = _component_context(order, comp, grading, mu)
    dec, pair = _connected_maximal(ctx)
    return ctx, pair


def maximal_gprg(order: Order, trusted: Optional[Grading] = None, jobs: int = 1) -> StarkDecomposition:
    """A maximal pair (A, G); A is then stark.

    Connected orders use the maximal isomorphism summand of the degree map.
    Otherwise each connected component R_x gets a maximal (A_x, G_x); with D
    the largest common direct summand of the G_x, each G_x splits as
    D_x + E_x with D_x isomorphic to D, and R = A[D] for A the product of
    the A_x[E_x] and D embedded diagonally.
    """
    if is_connected(order):
        ctx = stark_context(order, trusted)
        dec, pair = _connected_maximal(ctx)
        certs = {"group_ring": pair.certificate(), "d0_has_no_iso_summand": True}
        return StarkDecomposition(order, pair.base, pair.group, ctx.trusted, certs)
    grading = universal_for(order, trusted)
    mu = roots_of_unity(order)
    comps = components(order)
    args = [(order, c, grading, mu) for c in comps]
    if jobs > 1 and len(comps) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_component_job, args))
    else:
        results = [_component_job(a) for a in args]
    groups = [pair.group.sub for _, pair in results]
    common = group_gcd([g.abstract for g in groups])
    qs = sorted((q for q, m in common.primary_factors().items() for _ in range(m)), reverse=True)
    diag = [[0] * order.rank for _ in qs]
    base_vecs = []
    for comp, (ctx, pair), gsub in zip(comps, results, groups):
        rest = gsub
        for t, q in enumerate(qs):
            x = _split_element(rest, q)
            if x is None:
                raise InvariantError("common summand does not split off a component group")
            vec = comp.embed(ctx.mu.embed(x))
            diag[t] = [a + b for a, b in zip(diag[t], vec)]
            retraction, comp_sub = split_cyclic_summand(rest.abstract, rest.coords(x))
            rest = Subgroup(rest.parent, [rest.incl(c) for c in comp_sub.gens])
        e_vecs = [ctx.mu.embed(a) for a in rest.elements()]
        for a in pair.base.lattice.basis:
            for e in e_vecs:
                base_vecs.append(comp.embed(ctx.order.product(a, e)))
    base = intlin.hnf(base_vecs, order.rank)
    group = UnitSubgroup.from_vectors(mu, [tuple(v) for v in diag])
    ok = is_gprg(order, base, group.vectors())
    if not ok:
        raise InvariantError("joined decomposition is not a group ring decomposition")
    certs = {"group_ring": ok, "components": len(comps), "d0_has_no_iso_summand": True}
    return StarkDecomposition(order, Subring(order, base), group, grading.trusted, certs)


def _split_element(sub: Subgroup, q: int):
    """Element of order q (parent coordinates) spanning a summand of sub."""
    cands = sorted(a for a in sub.abstract.elements() if sub.abstract.element_order(a) == q)
    for a in cands:
        if split_cyclic_summand(sub.abstract, a) is not None:
            return sub.incl(a)
    return None


def is_stark(order: Order, trusted: Optional[Grading] = None) -> bool:
    return maximal_gprg(order, trusted).group.order == 1


def swap_check(order: Order, p1: GpRgPair, p2: GpRgPair) -> dict[str, bool]:
    """Which of A[G], B[H], A[H], B[G] equal R, for p1 = (A, G), p2 = (B, H)."""
    a, g = p1.base.lattice, p1.group.vectors()
    b, h = p2.base.lattice, p2.group.vectors()
    return {
        "A[G]": is_gprg(order, a, g),
        "B[H]": is_gprg(order, b, h),
        "A[H]": is_gprg(order, a, h),
        "B[G]": is_gprg(order, b, g),
    }


def _apply_matrix(mat, v):
    return tuple(intlin.matvec(mat, v))


@dataclass(eq=False)
class Refinement:
    base: Subring
    left: UnitSubgroup  # I with A = C[I]
    right: UnitSubgroup  # J with sigma(B) = C[J]
    automorphism: list[list[int]]
    maximal: GpRgPair

    def to_json(self) -> dict:
        return {
            "common_base": [[str(x) for x in b] for b in self.base.lattice.basis],
            "I": self.left.sub.abstract.to_json(),
            "I_generators": [[str(x) for x in v] for v in self.left.gen_vectors()],
            "J": self.right.sub.abstract.to_json(),
            "J_generators": [[str(x) for x in v] for v in self.right.gen_vectors()],
            "automorphism": [[str(x) for x in r] for r in self.automorphism],
        }


def common_refinement(ctx: StarkContext, p1: GpRgPair, p2: GpRgPair) -> Refinement:
    """C, I, J and a ring automorphism sigma with A = C[I] and sigma(B) = C[J],
    so that I x G and J x H are isomorphic; connected orders only."""
    if not is_connected(ctx.order):
        raise UnsupportedError("common refinement needs a connected order")
    d = ctx.d
    dec1 = max_iso_dec(d, dec_from_id0(d, id0_from_gprg(ctx, p1)))
    dec2 = max_iso_dec(d, dec_from_id0(d, id0_from_gprg(ctx, p2)))
    top1 = gprg_from_dec(ctx, dec1)
    top2 = gprg_from_dec(ctx, dec2)
    unit = connecting_unit(d, dec2, dec1)
    sigma = unit_automorphism(ctx.dm, unit.q.f)
    moved = intlin.hnf([_apply_matrix(sigma, v) for v in top2.base.lattice.basis], ctx.order.rank)
    if moved != top1.base.lattice:
        sigma = unit_automorphism(ctx.dm, unit.inverse.f)
        moved = intlin.hnf([_apply_matrix(sigma, v) for v in top2.base.lattice.basis], ctx.order.rank)
        if moved != top1.base.lattice:
            raise InvariantError("automorphism does not carry one maximal pair to the other")
    b_moved = intlin.hnf([_apply_matrix(sigma, v) for v in p2.base.lattice.basis], ctx.order.rank)
    mu = ctx.mu
    v_sub = top1.group.sub
    i_sub = Subgroup(mu.group, [x for x in v_sub.elements() if p1.base.lattice.contains(mu.embed(x))])
    j_sub = Subgroup(mu.group, [x for x in v_sub.elements() if b_moved.contains(mu.embed(x))])
    c = top1.base.lattice
    i_vecs = [mu.embed(x) for x in i_sub.elements()]
    j_vecs = [mu.embed(x) for x in j_sub.elements()]
    if not _is_group_ring_over(ctx.order, c, i_vecs, p1.base.lattice):
        raise InvariantError("A is not C[I]")
    if not _is_group_ring_over(ctx.order, c, j_vecs, b_moved):
        raise InvariantError("sigma(B) is not C[J]")
    return Refinement(top1.base, UnitSubgroup(mu, i_sub), UnitSubgroup(mu, j_sub), sigma, top1)


def _is_group_ring_over(order: Order, c: intlin.HnfBasis, vecs, target: intlin.HnfBasis) -> bool:
    prods = [order.product(a, g) for g in vecs for a in c.basis]
    if len(prods) != target.rank:
        return False
    return intlin.hnf(prods, order.rank) == target
