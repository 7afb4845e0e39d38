"""Finite abelian groups in invariant-factor form, homomorphisms between
them, subgroups, Hom groups and a few structural operations.

A FinAbGroup with invariants (d_1, ..., d_k), d_i >= 2 and d_i | d_{i+1}, is
Z/d_1 x ... x Z/d_k. Elements are tuples of coordinates with 0 <= x_i < d_i.
A homomorphism is an integer matrix with one row per target generator and one
column per source generator.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, Optional, Sequence

from . import intlin
from .errors import InputError, InvariantError

Element = tuple[int, ...]


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_powers(n: int) -> list[int]:
    return [p**e for p, e in sorted(_factorize(n).items())]


def is_prime_power(n: int) -> bool:
    return n > 1 and len(_factorize(n)) == 1


@dataclass(frozen=True)
class FinAbGroup:
    invariants: tuple[int, ...]

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        object.__setattr__(self, "invariants", inv)
        for i, d in enumerate(inv):
            if d < 2:
                raise InputError(f"invariant factor {d} must be at least 2")
            if i and d % inv[i - 1]:
                raise InputError(f"invariant factors {list(inv)} fail the divisibility chain")

    @classmethod
    def trivial(cls) -> "FinAbGroup":
        return cls(())

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "FinAbGroup":
        """Normalize any list of cyclic orders (1 allowed) into invariant form."""
        return cyclic_product(list(factors))[0]

    @property
    def ngens(self) -> int:
        return len(self.invariants)

    @cached_property
    def order(self) -> int:
        out = 1
        for d in self.invariants:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    def is_trivial(self) -> bool:
        return not self.invariants

    def zero(self) -> Element:
        return (0,) * self.ngens

    def reduce(self, x: Sequence[int]) -> Element:
        if len(x) != self.ngens:
            raise InputError(f"element {list(x)} has wrong length for group {list(self.invariants)}")
        return tuple(int(v) % d for v, d in zip(x, self.invariants))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariants))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % d for a, d in zip(x, self.invariants))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % d for a, d in zip(x, self.invariants))

    def basis_element(self, i: int) -> Element:
        return tuple(int(j == i) for j in range(self.ngens))

    def element_order(self, x: Element) -> int:
        out = 1
        for a, d in zip(x, self.invariants):
            k = d // gcd(a, d)
            out = out * k // gcd(out, k)
        return out

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic order of coordinates."""
        return itertools.product(*(range(d) for d in self.invariants))

    def primary_factors(self) -> Counter:
        """Multiset of prime-power cyclic factors."""
        c: Counter = Counter()
        for d in self.invariants:
            c.update(prime_powers(d))
        return c

    def is_isomorphic(self, other: "FinAbGroup") -> bool:
        return self.invariants == other.invariants

    def to_json(self) -> list[str]:
        return [str(d) for d in self.invariants]


@dataclass(frozen=True)
class Normalization:
    """Result of normalizing a presented group Z^n / relations.

    to_norm maps ambient coordinates to normalized coordinates (reduce mod the
    invariants afterwards); from_norm has one column per normalized
    generator, giving a preimage in ambient coordinates.
    """

    group: FinAbGroup
    to_norm: tuple[tuple[int, ...], ...]
    from_norm: tuple[tuple[int, ...], ...]

    def normalize(self, x: Sequence[int]) -> Element:
        return self.group.reduce(intlin.matvec(self.to_norm, x)) if self.group.ngens else ()

    def lift(self, y: Sequence[int]) -> list[int]:
        n = len(self.from_norm)
        return [sum(row[j] * y[j] for j in range(len(y))) for row in self.from_norm] if n else []


def from_presentation(relations: Sequence[Sequence[int]], ngens: Optional[int] = None) -> Normalization:
    """Normalize Z^n / (column span of relations) into invariant-factor form.

    relations is an n x m matrix whose columns are relation vectors. An
    infinite cokernel raises InputError.
    """
    rel = [list(r) for r in relations]
    n = len(rel) if rel else (ngens or 0)
    if not rel:
        rel = [[] for _ in range(n)]
    m = len(rel[0]) if n else 0
    if n == 0:
        return Normalization(FinAbGroup(()), (), ())
    if m == 0:
        raise InputError("presentation has an infinite cokernel")
    res = intlin.snf(rel)
    diag = [res.s[i][i] if i < m else 0 for i in range(n)]
    if any(d == 0 for d in diag):
        raise InputError("presentation has an infinite cokernel")
    keep = [i for i, d in enumerate(diag) if d != 1]
    uinv = intlin.unimodular_inverse(res.u)
    group = FinAbGroup(tuple(diag[i] for i in keep))
    to_norm = tuple(tuple(x % diag[i] for x in res.u[i]) for i in keep)
    from_norm = tuple(tuple(uinv[r][i] for i in keep) for r in range(n))
    return Normalization(group, to_norm, from_norm)


def cyclic_product(orders: Sequence[int]) -> tuple[FinAbGroup, Normalization]:
    """Normalize Z/o_1 x ... x Z/o_k (orders may be 1)."""
    k = len(orders)
    if k == 0:
        norm = Normalization(FinAbGroup(()), (), ())
        return norm.group, norm
    for o in orders:
        if o < 1:
            raise InputError("cyclic orders must be positive")
    rel = [[orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
    norm = from_presentation(rel)
    return norm.group, norm


def direct_product(groups: Sequence[FinAbGroup]) -> tuple[FinAbGroup, Normalization]:
    """Normalized direct product; raw coordinates are the concatenation."""
    return cyclic_product([d for g in groups for d in g.invariants])


# --- homomorphisms -----------------------------------------------------------


@dataclass(frozen=True)
class AbHom:
    src: FinAbGroup
    tgt: FinAbGroup
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        mat = tuple(
            tuple(int(x) % e for x in row) for row, e in zip(self.matrix, self.tgt.invariants)
        )
        if len(self.matrix) != self.tgt.ngens or any(len(r) != self.src.ngens for r in self.matrix):
            raise InputError("homomorphism matrix has the wrong shape")
        object.__setattr__(self, "matrix", mat)
        for j, d in enumerate(self.src.invariants):
            for i, e in enumerate(self.tgt.invariants):
                if (d * mat[i][j]) % e:
                    raise InputError("matrix does not define a homomorphism")

    @classmethod
    def zero(cls, src: FinAbGroup, tgt: FinAbGroup) -> "AbHom":
        return cls(src, tgt, tuple((0,) * src.ngens for _ in range(tgt.ngens)))

    @classmethod
    def identity(cls, g: FinAbGroup) -> "AbHom":
        return cls(g, g, tuple(tuple(intlin.identity(g.ngens)[i]) for i in range(g.ngens)))

    @classmethod
    def from_images(cls, src: FinAbGroup, tgt: FinAbGroup, images: Sequence[Element]) -> "AbHom":
        """Homomorphism sending the i-th generator of src to images[i]."""
        return cls(src, tgt, tuple(tuple(im[i] for im in images) for i in range(tgt.ngens)))

    def __call__(self, x: Sequence[int]) -> Element:
        return tuple(
            sum(a * b for a, b in zip(row, x)) % e for row, e in zip(self.matrix, self.tgt.invariants)
        )

    def column(self, j: int) -> Element:
        return tuple(row[j] for row in self.matrix)

    def compose(self, inner: "AbHom") -> "AbHom":
        """self o inner."""
        if inner.tgt != self.src:
            raise InputError("homomorphisms do not compose")
        mid = self.src.ngens
        mat = tuple(
            tuple(sum(row[t] * inner.matrix[t][j] for t in range(mid)) for j in range(inner.src.ngens))
            for row in self.matrix
        )
        return AbHom(inner.src, self.tgt, mat)

    def __add__(self, other: "AbHom") -> "AbHom":
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise InputError("homomorphisms have different domains")
        return AbHom(self.src, self.tgt, tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def __neg__(self) -> "AbHom":
        return AbHom(self.src, self.tgt, tuple(tuple(-a for a in r) for r in self.matrix))

    def __sub__(self, other: "AbHom") -> "AbHom":
        return self + (-other)

    def scale(self, k: int) -> "AbHom":
        return AbHom(self.src, self.tgt, tuple(tuple(k * a for a in r) for r in self.matrix))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.matrix for a in r)

    def kernel(self) -> "Subgroup":
        return kernel_image(self)[0]

    def image(self) -> "Subgroup":
        return Subgroup(self.tgt, [self.column(j) for j in range(self.src.ngens)])

    def is_injective(self) -> bool:
        return self.kernel().order == 1

    def is_bijective(self) -> bool:
        return self.src.order == self.tgt.order and self.is_injective()

    def to_json(self) -> list[list[str]]:
        return [[str(a) for a in row] for row in self.matrix]


def hom_from_values(src: FinAbGroup, tgt: FinAbGroup, pairs: Sequence[tuple[Element, Element]]) -> AbHom:
    """The homomorphism with the given values on elements generating src.

    Raises InvariantError if the values are inconsistent.
    """
    if src.ngens == 0:
        return AbHom.zero(src, tgt)
    xs = [p[0] for p in pairs]
    a = [[x[i] for x in xs] for i in range(src.ngens)]
    images = []
    for j in range(src.ngens):
        c = intlin.solve(a, list(src.basis_element(j)), list(src.invariants))
        if c is None:
            raise InvariantError("given elements do not generate the source group")
        img = tgt.zero()
        for ck, (_, y) in zip(c, pairs):
            img = tgt.add(img, tgt.scale(ck, y))
        images.append(img)
    try:
        h = AbHom.from_images(src, tgt, images)
    except InputError as exc:
        raise InvariantError("values do not define a homomorphism") from exc
    for x, y in pairs:
        if h(x) != tgt.reduce(y):
            raise InvariantError("values do not define a homomorphism")
    return h


# --- subgroups -----------------------------------------------------------------


class Subgroup:
    """Subgroup of a parent group generated by given elements.

    Carries its own invariant-factor structure (abstract) and the inclusion
    abstract -> parent. Subgroups compare equal iff they have equal elements.
    """

    def __init__(self, parent: FinAbGroup, gens: Iterable[Sequence[int]]):
        self.parent = parent
        self.gens = [parent.reduce(g) for g in gens]
        self.gens = [g for g in self.gens if any(g)]
        k = len(self.gens)
        n = parent.ngens
        # relation lattice of Z^k -> parent, from the kernel of [gens | diag]
        if k == 0:
            self.abstract = FinAbGroup(())
            self.incl = AbHom.zero(self.abstract, parent)
            return
        big = [[g[i] for g in self.gens] + [parent.invariants[i] if i == t else 0 for t in range(n)] for i in range(n)]
        ker = intlin.kernel_basis(big, k + n)
        rel = [[v[i] for v in ker] for i in range(k)]
        norm = from_presentation(rel)
        self.abstract = norm.group
        images = []
        for j in range(self.abstract.ngens):
            coeffs = [norm.from_norm[i][j] for i in range(k)]
            img = parent.zero()
            for c, g in zip(coeffs, self.gens):
                img = parent.add(img, parent.scale(c, g))
            images.append(img)
        self.incl = AbHom.from_images(self.abstract, parent, images)

    @classmethod
    def whole(cls, g: FinAbGroup) -> "Subgroup":
        return cls(g, [g.basis_element(i) for i in range(g.ngens)])

    @classmethod
    def trivial(cls, g: FinAbGroup) -> "Subgroup":
        return cls(g, [])

    @property
    def order(self) -> int:
        return self.abstract.order

    @cached_property
    def _table(self) -> dict[Element, Element]:
        return {self.incl(a): a for a in self.abstract.elements()}

    def elements(self) -> list[Element]:
        return list(self._table.keys())

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self._table)

    def contains(self, x: Sequence[int]) -> bool:
        return self.parent.reduce(x) in self._table

    def coords(self, x: Sequence[int]) -> Element:
        try:
            return self._table[self.parent.reduce(x)]
        except KeyError:
            raise InvariantError(f"element {list(x)} is not in the subgroup") from None

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.gens)

    @cached_property
    def key(self) -> intlin.HnfBasis:
        """Canonical form: HNF of the preimage lattice in Z^n."""
        n = self.parent.ngens
        vecs = [list(g) for g in self.gens]
        vecs += [[self.parent.invariants[i] if i == t else 0 for t in range(n)] for i in range(n)]
        return intlin.hnf(vecs, n)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent == other.parent and self.key == other.key

    def __hash__(self):
        return hash((self.parent, self.key))

    def __add__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, self.gens + other.gens)

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, [x for x in self.elements() if other.contains(x)])

    def restrict(self, hom: AbHom, tgt: "Subgroup") -> AbHom:
        """hom restricted to self, landing in tgt, on abstract groups."""
        images = [tgt.coords(hom(self.incl.column(j))) for j in range(self.abstract.ngens)]
        return AbHom.from_images(self.abstract, tgt.abstract, images)

    def image_under(self, hom: AbHom) -> "Subgroup":
        return Subgroup(hom.tgt, [hom(g) for g in self.gens])

    def __repr__(self):
        return f"Subgroup({list(self.abstract.invariants)} in {list(self.parent.invariants)}, gens={self.gens})"


def kernel_image(f: AbHom) -> tuple[Subgroup, Subgroup]:
    src, tgt = f.src, f.tgt
    k, n = src.ngens, tgt.ngens
    if k == 0:
        return Subgroup.trivial(src), Subgroup.trivial(tgt)
    if n == 0:
        return Subgroup.whole(src), Subgroup.trivial(tgt)
    big = [list(f.matrix[i]) + [tgt.invariants[i] if i == t else 0 for t in range(n)] for i in range(n)]
    ker = intlin.kernel_basis(big, k + n)
    kernel = Subgroup(src, [tuple(v[:k]) for v in ker])
    return kernel, f.image()


# --- Hom groups ----------------------------------------------------------------


@dataclass(frozen=True)
class HomGroup:
    """Hom(src, tgt) as a finite abelian group.

    Raw coordinates are indexed by (i, j), target generator i and source
    generator j, with raw generator E_ij scaled by steps[i][j] and of order
    sizes[i][j] = gcd(src_j, tgt_i).
    """

    src: FinAbGroup
    tgt: FinAbGroup
    group: FinAbGroup
    norm: Normalization
    steps: tuple[tuple[int, ...], ...]
    sizes: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return self.group.order

    def raw_to_hom(self, raw: Sequence[int]) -> AbHom:
        n = self.src.ngens
        mat = [[raw[i * n + j] * self.steps[i][j] for j in range(n)] for i in range(self.tgt.ngens)]
        return AbHom(self.src, self.tgt, tuple(map(tuple, mat)))

    def element_to_hom(self, x: Sequence[int]) -> AbHom:
        return self.raw_to_hom(self.norm.lift(x))

    def hom_to_element(self, h: AbHom) -> Element:
        n = self.src.ngens
        raw = [h.matrix[i][j] // self.steps[i][j] for i in range(self.tgt.ngens) for j in range(n)]
        return self.norm.normalize(raw)

    def basis_homs(self) -> list[AbHom]:
        return [self.element_to_hom(self.group.basis_element(i)) for i in range(self.group.ngens)]

    def all_homs(self) -> Iterator[AbHom]:
        ranges = [range(s) for row in self.sizes for s in row]
        for raw in itertools.product(*ranges):
            yield self.raw_to_hom(raw)


def hom_group(a: FinAbGroup, b: FinAbGroup) -> HomGroup:
    sizes = tuple(tuple(gcd(d, e) for d in a.invariants) for e in b.invariants)
    steps = tuple(tuple(e // gcd(d, e) for d in a.invariants) for e in b.invariants)
    _, norm = cyclic_product([s for row in sizes for s in row])
    return HomGroup(a, b, norm.group, norm, steps, sizes)


def hom_count(a: FinAbGroup, b: FinAbGroup) -> int:
    out = 1
    for d in a.invariants:
        for e in b.invariants:
            out *= gcd(d, e)
    return out


def automorphisms(g: FinAbGroup) -> list[AbHom]:
    return [h for h in hom_group(g, g).all_homs() if h.is_bijective()]


# --- structural operations -------------------------------------------------------


def group_from_primary(factors: Counter) -> FinAbGroup:
    by_prime: dict[int, list[int]] = {}
    for q, mult in factors.items():
        p = min(_factorize(q))
        by_prime.setdefault(p, []).extend([q] * mult)
    for qs in by_prime.values():
        qs.sort(reverse=True)
    length = max((len(qs) for qs in by_prime.values()), default=0)
    inv = []
    for i in range(length):
        d = 1
        for qs in by_prime.values():
            if i < len(qs):
                d *= qs[i]
        inv.append(d)
    return FinAbGroup(tuple(sorted(inv)))


def group_gcd(groups: Sequence[FinAbGroup]) -> FinAbGroup:
    """Largest group (up to isomorphism) that is a direct summand of each.

    Computed as the intersection of the prime-power cyclic factor multisets.
    """
    if not groups:
        raise InputError("gcd of an empty list of groups")
    common = groups[0].primary_factors()
    for g in groups[1:]:
        common &= g.primary_factors()
    return group_from_primary(common)


def split_cyclic_summand(g: FinAbGroup, x: Element) -> Optional[tuple[AbHom, Subgroup]]:
    """Retraction r: g -> g onto <x> with r(x) = x, and its kernel.

    Returns None if <x> is not a direct summand of g.
    """
    x = g.reduce(x)
    if not any(x):
        raise InputError("cannot split off the cyclic subgroup of the zero element")
    n = g.element_order(x)
    k = g.ngens
    # unknowns c_j with r(e_j) = c_j x: d_j c_j = 0 and sum x_j c_j = 1 mod n
    a = [[g.invariants[j] if j == t else 0 for t in range(k)] for j in range(k)]
    a.append(list(x))
    b = [0] * k + [1]
    c = intlin.solve(a, b, [n] * (k + 1))
    if c is None:
        return None
    r = AbHom.from_images(g, g, [g.scale(cj, x) for cj in c])
    return r, r.kernel()


def all_subgroups(g: FinAbGroup) -> list[Subgroup]:
    """Every subgroup, by closure under adding one cyclic subgroup at a time."""
    seen: dict = {}
    start = Subgroup.trivial(g)
    seen[start.element_set] = start
    frontier = [start]
    elems = list(g.elements())
    while frontier:
        nxt = []
        for h in frontier:
            for x in elems:
                if x in h.element_set:
                    continue
                k = Subgroup(g, h.gens + [x])
                if k.element_set not in seen:
                    seen[k.element_set] = k
                    nxt.append(k)
        frontier = nxt
    return list(seen.values())
