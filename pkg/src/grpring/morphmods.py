"""Morphisms of finite abelian groups viewed as modules, their direct sum
decompositions, and the ring Z + Hom(target, source) acting on them.

For d: mu -> gamma, the ring Q(d) has elements (m, f) with m an integer and
f: gamma -> mu, multiplied by (m, f)(n, g) = (mn, m g + n f + f d g). It acts
on mu by m + f d and on gamma by m + d f. The elements 1 + f form a monoid
U(d) and its invertible elements form the group U*(d); 1 + f is invertible
exactly when 1 + d f is an automorphism of gamma.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from . import kernels
from .abgroups import (
    AbHom,
    Element,
    FinAbGroup,
    Subgroup,
    hom_count,
    hom_from_values,
    hom_group,
    is_prime_power,
    split_cyclic_summand,
)
from .errors import InputError, InvariantError, UnsupportedError

DEFAULT_MAX_ENUM = 4096


@dataclass(frozen=True)
class MorphModule:
    d: AbHom

    @property
    def src(self) -> FinAbGroup:
        return self.d.src

    @property
    def tgt(self) -> FinAbGroup:
        return self.d.tgt


@dataclass(frozen=True)
class QElem:
    m: int
    f: AbHom  # target -> source

    def act_src(self, d: AbHom) -> AbHom:
        """m + f d on the source group."""
        return AbHom.identity(d.src).scale(self.m) + self.f.compose(d)

    def act_tgt(self, d: AbHom) -> AbHom:
        """m + d f on the target group."""
        return AbHom.identity(d.tgt).scale(self.m) + d.compose(self.f)


def q_one(d: AbHom) -> QElem:
    return QElem(1, AbHom.zero(d.tgt, d.src))


def q_mul(d: AbHom, x: QElem, y: QElem) -> QElem:
    f = y.f.scale(x.m) + x.f.scale(y.m) + x.f.compose(d).compose(y.f)
    return QElem(x.m * y.m, f)


@dataclass(frozen=True)
class UStarElem:
    q: QElem
    inverse: QElem


def _invert_aut(h: AbHom) -> AbHom:
    """Inverse of an automorphism by walking its powers."""
    ident = AbHom.identity(h.src)
    prev = ident
    cur = h
    for _ in range(max(1, h.src.order) ** 2 + 1):
        if cur == ident:
            return prev
        prev = cur
        cur = h.compose(cur)
    raise InvariantError("endomorphism has no finite order")


def u_star_invert(d: AbHom, u: QElem) -> Optional[UStarElem]:
    """Inverse of u = 1 + f in Q(d), or None when u is not a unit."""
    if u.m != 1:
        raise InputError("only elements of the form 1 + f are handled")
    h = u.act_tgt(d)
    if not h.is_bijective():
        return None
    w = _invert_aut(h)
    inv = QElem(1, -(u.f.compose(w)))
    one = q_one(d)
    if q_mul(d, u, inv) != one or q_mul(d, inv, u) != one:
        raise InvariantError("computed inverse in Q(d) is wrong")
    return UStarElem(u, inv)


def _check_bound(d: AbHom, bound: int) -> int:
    size = hom_count(d.tgt, d.src)
    if size > bound:
        raise UnsupportedError(f"Hom(target, source) has {size} elements, above the enumeration bound {bound}")
    return size


def _scan_args(d: AbHom):
    hg = hom_group(d.tgt, d.src)
    return hg, (d.matrix, d.src.invariants, d.tgt.invariants, hg.steps, hg.sizes)


def _flat_to_hom(d: AbHom, flat) -> AbHom:
    ng = d.tgt.ngens
    rows = tuple(tuple(flat[i * ng:(i + 1) * ng]) for i in range(d.src.ngens))
    return AbHom(d.tgt, d.src, rows)


def id0_enumerate(d: AbHom, bound: int = DEFAULT_MAX_ENUM) -> list[AbHom]:
    """Every f: target -> source with f d f = f."""
    _check_bound(d, bound)
    _, args = _scan_args(d)
    return [_flat_to_hom(d, flat) for flat in kernels.id0_scan(*args)]


def units_enumerate(d: AbHom, bound: int = DEFAULT_MAX_ENUM) -> list[AbHom]:
    """Every f with 1 + f a unit of Q(d)."""
    _check_bound(d, bound)
    _, args = _scan_args(d)
    return [_flat_to_hom(d, flat) for flat in kernels.unit_scan(*args)]


# --- decompositions ----------------------------------------------------------


@dataclass(eq=False)
class MorphDec:
    """d = d0 + d1 with d0: src0 -> tgt0 and d1: src1 -> tgt1."""

    d: AbHom
    src0: Subgroup
    src1: Subgroup
    tgt0: Subgroup
    tgt1: Subgroup

    @property
    def d0(self) -> AbHom:
        return self.src0.restrict(self.d, self.tgt0)

    @property
    def d1(self) -> AbHom:
        return self.src1.restrict(self.d, self.tgt1)

    @cached_property
    def key(self):
        return (self.src0.key, self.src1.key, self.tgt0.key, self.tgt1.key)

    def __eq__(self, other):
        return isinstance(other, MorphDec) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def is_valid(self) -> bool:
        d = self.d
        mu, gam = d.src.order, d.tgt.order
        if self.src0.order * self.src1.order != mu or (self.src0 + self.src1).order != mu:
            return False
        if self.tgt0.order * self.tgt1.order != gam or (self.tgt0 + self.tgt1).order != gam:
            return False
        if not all(self.tgt0.contains(d(x)) for x in self.src0.gens):
            return False
        return all(self.tgt1.contains(d(x)) for x in self.src1.gens)

    def is_iso_dec(self) -> bool:
        return self.is_valid() and self.src1.order == self.tgt1.order and self.d1.is_bijective()

    def transform(self, u: QElem) -> "MorphDec":
        """Image under the automorphism pair (1 + f d, 1 + d f) of u = 1 + f."""
        a, b = u.act_src(self.d), u.act_tgt(self.d)
        return MorphDec(
            self.d,
            self.src0.image_under(a),
            self.src1.image_under(a),
            self.tgt0.image_under(b),
            self.tgt1.image_under(b),
        )


def dec_from_id0(d: AbHom, f: AbHom) -> MorphDec:
    """The decomposition determined by an idempotent f (f d f = f).

    f d and d f are idempotents on source and target; d1 runs between their
    images and d0 between their kernels.
    """
    fd = f.compose(d)
    df = d.compose(f)
    if f.compose(df) != f:
        raise InputError("f is not in Id0(d)")
    ident_s, ident_t = AbHom.identity(d.src), AbHom.identity(d.tgt)
    return MorphDec(d, (ident_s - fd).image(), fd.image(), (ident_t - df).image(), df.image())


def id0_from_dec(dec: MorphDec) -> AbHom:
    """Inverse of dec_from_id0: zero on tgt0 and the inverse of d1 on tgt1."""
    d = dec.d
    d1_inv_pairs = []
    for y in dec.tgt0.gens:
        d1_inv_pairs.append((y, d.src.zero()))
    inv = _subgroup_iso_inverse(d, dec.src1, dec.tgt1)
    for y in dec.tgt1.gens:
        d1_inv_pairs.append((y, inv(y)))
    return hom_from_values(d.tgt, d.src, d1_inv_pairs)


def _subgroup_iso_inverse(d: AbHom, src: Subgroup, tgt: Subgroup):
    table = {d(x): x for x in src.elements()}
    if len(table) != src.order or set(table) != tgt.element_set:
        raise InvariantError("d does not restrict to an isomorphism")
    return lambda y: table[d.tgt.reduce(y)]


def _retraction_in(sub: Subgroup, y: Element):
    """Retraction of sub onto <y> (y in sub, parent coordinates), or None."""
    ya = sub.coords(y)
    res = split_cyclic_summand(sub.abstract, ya)
    if res is None:
        return None
    r, _ = res
    return lambda x: sub.incl(r(sub.coords(x)))


def _peel(d: AbHom, src: Subgroup, tgt: Subgroup):
    """One cyclic iso summand of d restricted to src -> tgt, or None.

    Candidates are tried by decreasing prime-power order, then by the
    lexicographically smallest normalized coordinates.
    """
    cands = []
    for xa in src.abstract.elements():
        o = src.abstract.element_order(xa)
        if is_prime_power(o):
            cands.append((-o, xa))
    cands.sort()
    for neg_o, xa in cands:
        x = src.incl(xa)
        y = d(x)
        if d.tgt.element_order(y) != -neg_o:
            continue
        retract_t = _retraction_in(tgt, y)
        if retract_t is None:
            continue
        order = -neg_o
        # d1^{-1} on <y>: y^k -> x^k
        back = {}
        for k in range(order):
            back[d.tgt.scale(k, y)] = d.src.scale(k, x)

        def proj(s, retract_t=retract_t, back=back):
            return back[retract_t(d(s))]

        new_src = Subgroup(d.src, [d.src.add(s, d.src.neg(proj(s))) for s in src.gens])
        ker_t = Subgroup(d.tgt, [d.tgt.add(t, d.tgt.neg(retract_t(t))) for t in tgt.gens])
        return x, y, new_src, ker_t
    return None


def max_iso_dec(d: AbHom, start: Optional[MorphDec] = None) -> MorphDec:
    """A maximal element of Dec_I(d), by greedy peeling of cyclic iso summands.

    With start given, peeling continues inside its d0 part, giving a maximal
    element above start.
    """
    if start is None:
        src, tgt = Subgroup.whole(d.src), Subgroup.whole(d.tgt)
        iso_src, iso_tgt = [], []
    else:
        src, tgt = start.src0, start.tgt0
        iso_src, iso_tgt = list(start.src1.gens), list(start.tgt1.gens)
    while True:
        step = _peel(d, src, tgt)
        if step is None:
            break
        x, y, src, tgt = step
        iso_src.append(x)
        iso_tgt.append(y)
    dec = MorphDec(d, src, Subgroup(d.src, iso_src), tgt, Subgroup(d.tgt, iso_tgt))
    if not dec.is_iso_dec():
        raise InvariantError("peeling produced an invalid decomposition")
    return dec


def has_iso_summand(d: AbHom, dec: MorphDec) -> bool:
    """Whether d0 of dec still has a nonzero isomorphism summand."""
    return _peel(d, dec.src0, dec.tgt0) is not None


# --- connecting units ------------------------------------------------------------


def _projection(whole: FinAbGroup, keep: Subgroup, along: Subgroup):
    """Projection onto keep along along, as a dict on all elements."""
    table = {}
    for a in keep.elements():
        for b in along.elements():
            table[whole.add(a, b)] = a
    if len(table) != whole.order:
        raise InvariantError("subgroups are not complementary")
    return table


def _same_part_unit(d: AbHom, a: MorphDec, b: MorphDec, common: int) -> QElem:
    """u = 1 - f with u a = b, when a and b share part `common` (0 or 1)."""
    if common == 0:
        com_s, com_t = a.src0, a.tgt0
        mov_a_s, mov_a_t = a.src1, a.tgt1
        mov_b_s, mov_b_t = b.src1, b.tgt1
    else:
        com_s, com_t = a.src1, a.tgt1
        mov_a_s, mov_a_t = a.src0, a.tgt0
        mov_b_s, mov_b_t = b.src0, b.tgt0
    # r = 1 - g, where g moves the a-part onto the b-part along the common part
    proj_s = _projection(d.src, com_s, mov_b_s)
    proj_t = _projection(d.tgt, com_t, mov_b_t)
    mov_a_t_iso = mov_a_s.order == mov_a_t.order and mov_a_s.restrict(d, mov_a_t).is_bijective()
    pairs = [(y, d.src.zero()) for y in com_t.gens]
    if mov_a_t_iso:
        inv = _subgroup_iso_inverse(d, mov_a_s, mov_a_t)
        for y in mov_a_t.gens:
            pairs.append((y, proj_s[inv(y)]))
    else:
        inv = _subgroup_iso_inverse(d, com_s, com_t)
        for y in mov_a_t.gens:
            pairs.append((y, inv(proj_t[y])))
    f = hom_from_values(d.tgt, d.src, pairs)
    return QElem(1, -f)


def connecting_unit(d: AbHom, a: MorphDec, b: MorphDec) -> Optional[UStarElem]:
    """u in U*(d) with u a = b.

    Handled when a and b share their d0 part or their d1 part, or when both
    are maximal (then through the mixed decomposition (d0 of a, d1 of b)).
    Returns None outside these cases.
    """
    if a.src0 == b.src0 and a.tgt0 == b.tgt0:
        u = _same_part_unit(d, a, b, 0)
    elif a.src1 == b.src1 and a.tgt1 == b.tgt1:
        u = _same_part_unit(d, a, b, 1)
    else:
        mid = MorphDec(d, a.src0, b.src1, a.tgt0, b.tgt1)
        if not mid.is_iso_dec():
            return None
        u1 = _same_part_unit(d, a, mid, 0)
        u2 = _same_part_unit(d, mid, b, 1)
        u = q_mul(d, u2, u1)
    unit = u_star_invert(d, u)
    if unit is None or a.transform(u) != b:
        raise InvariantError("connecting unit does not map the decompositions")
    return unit

