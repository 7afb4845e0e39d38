"""Automorphisms of a group ring A[G] over a stark base A, as 2x2 matrices

    [[alpha, s], [t, sigma]]

with alpha in Aut(A), s: G -> mu(A), t: Gamma(A) -> G and sigma in Aut(G).
The matrix acts on x g (x in A_gamma) by x g -> alpha(x) s(g) t(gamma) sigma(g).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from . import intlin
from .abgroups import AbHom, FinAbGroup, automorphisms, hom_count, hom_from_values, hom_group
from .errors import InputError, InvariantError, UnsupportedError
from .gradings import DegreeMap, Grading, degree_map, unit_automorphism, universal_for
from .morphmods import QElem, u_star_invert, units_enumerate
from .orders import Order, RootsOfUnity, group_ring, roots_of_unity

Matrix = tuple[tuple[int, ...], ...]


def _freeze(m) -> Matrix:
    return tuple(tuple(int(x) for x in r) for r in m)


GAUSSIAN_MUL = (((1, 0), (0, 1)), ((0, 1), (-1, 0)))
EISENSTEIN_MUL = (((1, 0), (0, 1)), ((0, 1), (-1, -1)))


def builtin_automorphisms(order: Order) -> list[Matrix]:
    """Aut(A) for Z, Z[i] and Z[zeta_3] in their standard bases."""
    if order.rank == 1:
        return [((1,),)]
    if order.rank == 2 and order.one == (1, 0):
        if order.mul == GAUSSIAN_MUL:
            return [((1, 0), (0, 1)), ((1, 0), (0, -1))]
        if order.mul == EISENSTEIN_MUL:
            return [((1, 0), (0, 1)), ((1, -1), (0, -1))]
    raise UnsupportedError("automorphisms of this base must be supplied")


@dataclass(eq=False)
class AutData:
    base: Order
    grading: Grading
    dm: DegreeMap
    aut: list[Matrix]

    def __post_init__(self):
        self.aut = [_freeze(a) for a in self.aut]
        self._index = {a: i for i, a in enumerate(self.aut)}
        n = self.base.rank
        for a in self.aut:
            if len(a) != n or abs(intlin.det(a)) != 1:
                raise InputError("automorphism matrix has the wrong shape or is not invertible")
            if not is_ring_automorphism(self.base, a):
                raise InputError("matrix is not a ring automorphism of the base")
        for a in self.aut:
            for b in self.aut:
                if _freeze(intlin.matmul(a, b)) not in self._index:
                    raise InputError("supplied automorphisms are not closed under composition")

    @property
    def mu(self) -> RootsOfUnity:
        return self.dm.mu

    @property
    def gamma(self) -> FinAbGroup:
        return self.grading.gamma

    def contains(self, a) -> bool:
        return _freeze(a) in self._index

    def on_mu(self, a: Matrix) -> AbHom:
        mu = self.mu
        imgs = [mu.coords(intlin.matvec(a, mu.embed(mu.group.basis_element(i)))) for i in range(mu.group.ngens)]
        if any(x is None for x in imgs):
            raise InvariantError("automorphism does not preserve the roots of unity")
        return AbHom.from_images(mu.group, mu.group, imgs)

    def on_gamma(self, a: Matrix) -> AbHom:
        g = self.grading
        pairs = []
        for deg_, lat in g.components.items():
            img = g.degree_of(intlin.matvec(a, lat.basis[0]))
            if img is None:
                raise InvariantError("automorphism does not preserve the grading")
            pairs.append((deg_, img))
        return hom_from_values(g.gamma, g.gamma, pairs)

    def plus(self, a: Matrix, f: AbHom) -> Matrix:
        """alpha + f: x in A_gamma -> alpha(x) f(gamma)."""
        g = self.grading
        n = self.base.rank
        cols, labels, inv = g._stack
        images = [self.base.product(intlin.matvec(a, b), self.mu.embed(f(lab))) for b, lab in zip(cols, labels)]
        mat = [[sum(images[k][i] * inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        if any(x.denominator != 1 for r in mat for x in r):
            raise InvariantError("alpha + f is not integral")
        return _freeze(mat)


def is_ring_automorphism(order: Order, a: Sequence[Sequence[int]]) -> bool:
    n = order.rank
    if tuple(intlin.matvec(a, order.one)) != order.one:
        return False
    cols = [tuple(r[j] for r in a) for j in range(n)]
    for i in range(n):
        for j in range(i, n):
            lhs = intlin.matvec(a, order.mul[i][j])
            if tuple(lhs) != order.product(cols[i], cols[j]):
                return False
    return abs(intlin.det(a)) == 1


def aut_data(base: Order, aut: Optional[Sequence] = None) -> AutData:
    g = universal_for(base)
    mu = roots_of_unity(base)
    return AutData(base, g, degree_map(g, mu), list(aut) if aut is not None else builtin_automorphisms(base))


@dataclass(frozen=True)
class MatrixGroupElem:
    alpha: Matrix
    s: AbHom  # G -> mu(A)
    t: AbHom  # Gamma(A) -> G
    sigma: AbHom  # G -> G


def m_mul(ctx: AutData, x: MatrixGroupElem, y: MatrixGroupElem) -> MatrixGroupElem:
    d = ctx.dm.hom
    a1, a2 = x.alpha, y.alpha
    top_left = ctx.plus(_freeze(intlin.matmul(a1, a2)), x.s.compose(y.t))
    if not ctx.contains(top_left):
        raise InvariantError("product left the automorphism group of the base")
    s = ctx.on_mu(a1).compose(y.s) + x.s.compose(y.sigma)
    t = x.t.compose(ctx.on_gamma(a2)) + x.sigma.compose(y.t)
    sigma = x.t.compose(d).compose(y.s) + x.sigma.compose(y.sigma)
    if not sigma.is_bijective():
        raise InvariantError("product has a non-invertible group part")
    return MatrixGroupElem(top_left, s, t, sigma)


def m_identity(ctx: AutData, group: FinAbGroup) -> MatrixGroupElem:
    n = ctx.base.rank
    return MatrixGroupElem(
        _freeze(intlin.identity(n)),
        AbHom.zero(group, ctx.mu.group),
        AbHom.zero(ctx.gamma, group),
        AbHom.identity(group),
    )


def m_elements(ctx: AutData, group: FinAbGroup):
    """Every matrix, in a fixed order."""
    s_all = list(hom_group(group, ctx.mu.group).all_homs())
    t_all = list(hom_group(ctx.gamma, group).all_homs())
    sig_all = automorphisms(group)
    for a, s, t, sig in itertools.product(ctx.aut, s_all, t_all, sig_all):
        yield MatrixGroupElem(a, s, t, sig)


def aut_order(ctx: AutData, group: FinAbGroup) -> int:
    """|Aut(A)| |Hom(G, mu(A))| |Hom(Gamma(A), G)| |Aut(G)|."""
    return (
        len(ctx.aut)
        * hom_count(group, ctx.mu.group)
        * hom_count(ctx.gamma, group)
        * len(automorphisms(group))
    )


def m_act(ctx: AutData, ring: Order, elem: MatrixGroupElem) -> Matrix:
    """Matrix of the action of elem on A[G] (built by orders.group_ring)."""
    prov = ring.provenance
    if prov is None or prov.kind != "group_ring" or prov.parts[0] is not ctx.base:
        raise InputError("ring is not the group ring over this base")
    group = prov.group
    elems = prov.group_elements
    idx = {g: t for t, g in enumerate(elems)}
    n = ctx.base.rank
    N = ring.rank
    cols, labels, inv = ctx.grading._stack
    out = [[0] * N for _ in range(N)]
    # image of b_i g for each basis element, via homogeneous parts of b_i
    for gi, g in enumerate(elems):
        sg = ctx.mu.embed(elem.s(g))
        sig = elem.sigma(g)
        for i in range(n):
            coeffs = [inv[k][i] for k in range(n)]
            for k, c in enumerate(coeffs):
                if not c:
                    continue
                x = [int(c) * v for v in cols[k]]
                img_a = ctx.base.product(intlin.matvec(elem.alpha, x), sg)
                h = group.add(elem.t(labels[k]), sig)
                t = idx[h]
                for r in range(n):
                    out[t * n + r][gi * n + i] += img_a[r]
    return _freeze(out)


def psi(dm: DegreeMap, f: AbHom) -> Matrix:
    """Graded ring automorphism x -> f(gamma) x attached to the unit 1 + f."""
    return _freeze(unit_automorphism(dm, f))


@dataclass
class ExactSequenceReport:
    u_star_base: int
    u_star_ring: int
    aut_base: int
    aut_ring: int
    kernel_size: int
    surjective: bool
    kernel_matches: bool

    @property
    def ok(self) -> bool:
        return (
            self.surjective
            and self.kernel_matches
            and self.kernel_size == self.u_star_base
            and self.u_star_ring * self.aut_base == self.u_star_base * self.aut_ring
        )


def _extend_base_automorphism(ctx: AutData, ring: Order, a: Matrix) -> Matrix:
    group = ring.provenance.group
    elem = MatrixGroupElem(a, AbHom.zero(group, ctx.mu.group), AbHom.zero(ctx.gamma, group), AbHom.identity(group))
    return m_act(ctx, ring, elem)


def exact_sequence_check(ctx: AutData, group: FinAbGroup, bound: int = 4096) -> ExactSequenceReport:
    """Check 0 -> U*(A) -> U*(A[G]) x| Aut(A) -> Aut(A[G]) -> 0 by enumeration.

    The map to Aut(A[G]) sends (u, alpha) to psi(u) composed with alpha
    extended to A[G]; U*(A) embeds as u -> (u^{-1}, psi_A(u)).
    """
    ring = group_ring(ctx.base, group)
    g_ring = universal_for(ring)
    dm_ring = degree_map(g_ring, roots_of_unity(ring))
    units_ring = units_enumerate(dm_ring.hom, bound)
    units_base = units_enumerate(ctx.dm.hom, bound)
    aut_ring = {m_act(ctx, ring, e) for e in m_elements(ctx, group)}
    images = {}
    kernel = set()
    ident = _freeze(intlin.identity(ring.rank))
    for f in units_ring:
        pf = psi(dm_ring, f)
        for a in ctx.aut:
            img = _freeze(intlin.matmul(pf, _extend_base_automorphism(ctx, ring, a)))
            images.setdefault(img, 0)
            images[img] += 1
            if img == ident:
                kernel.add((f.matrix, a))
    # U*(A) inside U*(A[G]): f on Gamma(A) extended by zero on G
    expected = set()
    mu_ring = dm_ring.mu
    for f in units_base:
        inv = u_star_invert(ctx.dm.hom, QElem(1, f)).inverse.f
        lifted = _lift_base_unit(ctx, ring, g_ring, mu_ring, inv)
        expected.add((lifted.matrix, psi(ctx.dm, f)))
    return ExactSequenceReport(
        u_star_base=len(units_base),
        u_star_ring=len(units_ring),
        aut_base=len(ctx.aut),
        aut_ring=len(aut_ring),
        kernel_size=len(kernel),
        surjective=set(images) == aut_ring,
        kernel_matches=kernel == expected,
    )


def _lift_base_unit(ctx: AutData, ring: Order, g_ring: Grading, mu_ring: RootsOfUnity, f: AbHom) -> AbHom:
    """f: Gamma(A) -> mu(A) as Gamma(A[G]) -> mu(A[G]), zero on G."""
    n = ctx.base.rank
    N = ring.rank
    pairs = []
    for deg_, lat in g_ring.components.items():
        b = lat.basis[0]
        block = next(t for t in range(N // n) if any(b[t * n:(t + 1) * n]))
        local = b[block * n:(block + 1) * n]
        base_deg = ctx.grading.degree_of(local)
        z = ctx.mu.embed(f(base_deg))
        v = [0] * N
        v[:n] = z
        pairs.append((deg_, mu_ring.coords(v)))
    return hom_from_values(g_ring.gamma, mu_ring.group, pairs)
