"""Slow reference computations used only by the tests.

They work on explicit element sets, minors and bounded box searches so that
they share as little code as possible with the algorithms under test.
"""

from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

# --- integer matrices --------------------------------------------------------------


def leibniz_det(m: Sequence[Sequence[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * leibniz_det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(n) if m[0][j])


def minors_gcd(m: Sequence[Sequence[int]], k: int) -> int:
    """gcd of all k x k minors (0 when there are none or all vanish)."""
    rows, cols = len(m), len(m[0]) if m else 0
    g = 0
    for ri in itertools.combinations(range(rows), k):
        for ci in itertools.combinations(range(cols), k):
            g = gcd(g, leibniz_det([[m[r][c] for c in ci] for r in ri]))
    return g


def smith_diagonal(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors from determinantal divisors d_k / d_{k-1}."""
    rows, cols = len(m), len(m[0]) if m else 0
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        dk = minors_gcd(m, k)
        if dk == 0:
            break
        out.append(dk // prev)
        prev = dk
    return out


def rational_rank(vectors: Sequence[Sequence[int]]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def rational_coords(basis: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[list[Fraction]]:
    """Coefficients of v in the span of independent basis vectors, or None."""
    n = len(v)
    k = len(basis)
    aug = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c] / aug[r][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        r += 1
    if any(aug[i][k] != 0 for i in range(r, n)):
        return None
    return [aug[i][k] / aug[i][i] for i in range(k)]


def same_lattice(gens: Sequence[Sequence[int]], basis: Sequence[Sequence[int]]) -> bool:
    """Whether the integer spans agree: gens lie in span(basis) integrally and
    the maximal minors of both have the same gcd."""
    gens = [list(g) for g in gens if any(g)]
    r = len(basis)
    if r == 0 or not gens:
        return r == 0 and not gens
    if rational_rank(gens) != r:
        return False
    for g in gens:
        c = rational_coords(basis, g)
        if c is None or any(x.denominator != 1 for x in c):
            return False
    n = len(basis[0])
    gm = [[g[i] for g in gens] for i in range(n)]
    bm = [[b[i] for b in basis] for i in range(n)]
    return minors_gcd(gm, r) == minors_gcd(bm, r)


# --- finite abelian groups by element sets ---------------------------------------------


def group_signature(elements: Sequence, order_of) -> Counter:
    """Element-order counts; they determine a finite abelian group up to isomorphism."""
    return Counter(order_of(x) for x in elements)


def closure(group, gens) -> frozenset:
    seen = {group.zero()}
    frontier = [group.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = group.add(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


_SUBGROUPS: dict = {}


def subgroups(group) -> list[frozenset]:
    key = tuple(group.invariants)
    if key not in _SUBGROUPS:
        _SUBGROUPS[key] = _subgroups(group)
    return _SUBGROUPS[key]


def _subgroups(group) -> list[frozenset]:
    elems = list(group.elements())
    trivial = frozenset([group.zero()])
    found = {trivial}
    frontier = [trivial]
    while frontier:
        s = frontier.pop()
        for x in elems:
            if x in s:
                continue
            t = closure(group, list(s) + [x])
            if t not in found:
                found.add(t)
                frontier.append(t)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _complements(group, sub: frozenset, subs: list[frozenset]) -> list[frozenset]:
    n = group.order
    return [s for s in subs if len(s) * len(sub) == n and len(s & sub) == 1]


def iso_decompositions(d) -> list[tuple[frozenset, frozenset, frozenset, frozenset]]:
    """All (src0, src1, tgt0, tgt1) with d = d0 + d1 and d1 bijective."""
    src_subs = subgroups(d.src)
    tgt_subs = subgroups(d.tgt)
    tgt_index = {s: s for s in tgt_subs}
    out = []
    for s1 in src_subs:
        t1 = frozenset(d(x) for x in s1)
        if len(t1) != len(s1):
            continue
        t1 = tgt_index[t1]
        t0_cands = _complements(d.tgt, t1, tgt_subs)
        for s0 in _complements(d.src, s1, src_subs):
            img = frozenset(d(x) for x in s0)
            for t0 in t0_cands:
                if img <= t0:
                    out.append((s0, s1, t0, t1))
    return out


def dec_leq(a, b) -> bool:
    """a <= b: the d0 parts shrink and the d1 parts grow."""
    return b[0] <= a[0] and b[2] <= a[2] and a[1] <= b[1] and a[3] <= b[3]


def maximal_decompositions(decs):
    return [a for a in decs if not any(b != a and dec_leq(a, b) for b in decs)]


def transform_sets(d, f, dec):
    """Image of a decomposition under the unit 1 + f, as element sets."""
    def alpha(x):
        return d.src.add(x, f(d(x)))

    def beta(y):
        return d.tgt.add(y, d(f(y)))

    return tuple(frozenset(m(x) for x in part) for m, part in zip((alpha, alpha, beta, beta), dec))


def is_unit_sets(d, f) -> bool:
    """1 + f is invertible iff y -> y + d f y is a bijection of the target."""
    images = {d.tgt.add(y, d(f(y))) for y in d.tgt.elements()}
    return len(images) == d.tgt.order


# --- rings ----------------------------------------------------------------------------


def tensor_product(mul, x, y) -> tuple[int, ...]:
    n = len(x)
    out = [0] * n
    for i in range(n):
        if x[i]:
            for j in range(n):
                if y[j]:
                    c = x[i] * y[j]
                    for k in range(n):
                        out[k] += c * mul[i][j][k]
    return tuple(out)


def torsion_units_in_box(mul, one, box: int = 1, max_order: int = 24) -> set:
    """Roots of unity whose coordinates lie in [-box, box]."""
    n = len(one)
    one = tuple(one)
    found = set()
    for v in itertools.product(range(-box, box + 1), repeat=n):
        cur = v
        for _ in range(max_order):
            if cur == one:
                found.add(v)
                break
            cur = tensor_product(mul, cur, v)
            if max(abs(c) for c in cur) > 10**6:
                break
    return found


def group_ring_automorphism_count(order, group_elements, invariants, box: int = 1) -> int:
    """Ring automorphisms of Z[G] (order built over Z) by searching images of
    the cyclic generators of G among box vectors."""
    n = order.rank
    mul = order.mul
    one = tuple(order.one)
    idx = {tuple(g): i for i, g in enumerate(group_elements)}
    def power(v, e):
        out = one
        for _ in range(e):
            out = tensor_product(mul, out, v)
        return out

    cands = []
    for o in invariants:
        cands.append([v for v in itertools.product(range(-box, box + 1), repeat=n) if power(v, o) == one])
    count = 0
    for images in itertools.product(*cands):
        cols = [None] * n
        for g, i in idx.items():
            v = one
            for e, img in zip(g, images):
                v = tensor_product(mul, v, power(img, e))
            cols[i] = v
        m = [[cols[j][i] for j in range(n)] for i in range(n)]
        if abs(leibniz_det(m)) == 1:
            count += 1
    return count


def ring_isomorphic(mul_r, one_r, mul_s, one_s, box: int = 3) -> bool:
    """Whether some basis map with entries in [-box, box] is a ring isomorphism R -> S."""
    n = len(one_r)
    if n != len(one_s):
        return False
    vecs = list(itertools.product(range(-box, box + 1), repeat=n))
    for cols in itertools.product(vecs, repeat=n):
        m = [[cols[j][i] for j in range(n)] for i in range(n)]
        if abs(leibniz_det(m)) != 1:
            continue

        def apply(v):
            return tuple(sum(m[i][j] * v[j] for j in range(n)) for i in range(n))

        if apply(one_r) != tuple(one_s):
            continue
        ok = True
        for i in range(n):
            for j in range(i, n):
                lhs = apply(mul_r[i][j])
                if lhs != tensor_product(mul_s, cols[i], cols[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def gram_matrix(mul) -> list[list[int]]:
    """Regular trace form Tr(b_i b_j), computed straight from the tensor."""
    n = len(mul)

    def trace_of(v):
        # trace of multiplication by v: sum_k v_k sum_i c_{k i i}
        return sum(v[k] * sum(mul[k][i][i] for i in range(n)) for k in range(n))

    return [[trace_of(mul[i][j]) for j in range(n)] for i in range(n)]
