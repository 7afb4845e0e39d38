import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from grpring.abgroups import (
    AbHom,
    FinAbGroup,
    Subgroup,
    all_subgroups,
    automorphisms,
    cyclic_product,
    from_presentation,
    group_gcd,
    hom_count,
    hom_from_values,
    hom_group,
    kernel_image,
    split_cyclic_summand,
)
from grpring.errors import InputError, InvariantError
from helpers import all_finite_abelian

GROUPS_32 = all_finite_abelian(32)


def signature(g: FinAbGroup, elems) -> Counter:
    return oracles.group_signature(elems, g.element_order)


def summand_signatures(g: FinAbGroup) -> set:
    """Isomorphism types (as element-order counts) of direct summands of g."""
    subs = oracles.subgroups(g)
    out = set()
    for s in subs:
        if any(len(s) * len(t) == g.order and len(s & t) == 1 for t in subs):
            out.add(frozenset(signature(g, s).items()))
    return out


def test_invariant_form_is_validated():
    with pytest.raises(InputError):
        FinAbGroup((4, 2))
    with pytest.raises(InputError):
        FinAbGroup((1,))
    assert FinAbGroup(()).order == 1


def test_from_presentation_examples():
    assert from_presentation([[2, 0], [0, 4]]).group.invariants == (2, 4)
    assert from_presentation([[2, 1], [0, 2]]).group.invariants == (4,)
    assert from_presentation([[1]]).group.invariants == ()
    with pytest.raises(InputError):
        from_presentation([[2, 0], [0, 0]])


def test_presentation_normalization_is_a_homomorphism():
    norm = from_presentation([[2, 1], [0, 2]])
    g = norm.group
    for a, b in itertools.product(range(4), repeat=2):
        x, y = norm.normalize([a, 0]), norm.normalize([0, b])
        assert g.add(x, y) == norm.normalize([a, b])
    # the relations map to zero
    assert norm.normalize([2, 0]) == g.zero()
    assert norm.normalize([1, 2]) == g.zero()


def test_hom_group_examples():
    assert hom_group(FinAbGroup((4,)), FinAbGroup((2,))).group.invariants == (2,)
    assert hom_group(FinAbGroup((2,)), FinAbGroup((2, 4))).group.invariants == (2, 2)
    assert hom_group(FinAbGroup(()), FinAbGroup((3,))).order == 1


def _count_homs_by_elements(a: FinAbGroup, b: FinAbGroup) -> int:
    elems = list(b.elements())
    count = 1
    for o in a.invariants:
        count *= sum(1 for y in elems if not any(b.scale(o, y)))
    return count


def test_hom_count_matches_element_enumeration():
    for a in GROUPS_32:
        for b in GROUPS_32:
            assert hom_count(a, b) == _count_homs_by_elements(a, b), (a, b)


def test_hom_group_addition_matches_representatives():
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.choice(GROUPS_32), rng.choice(GROUPS_32)
        hg = hom_group(a, b)
        x = tuple(rng.randrange(o) for o in hg.group.invariants)
        y = tuple(rng.randrange(o) for o in hg.group.invariants)
        assert hg.element_to_hom(hg.group.add(x, y)) == hg.element_to_hom(x) + hg.element_to_hom(y)
        assert hg.hom_to_element(hg.element_to_hom(x)) == x


def test_all_homs_are_distinct_and_well_defined():
    a, b = FinAbGroup((2, 4)), FinAbGroup((4,))
    homs = list(hom_group(a, b).all_homs())
    assert len({h.matrix for h in homs}) == len(homs) == _count_homs_by_elements(a, b)


def test_abhom_rejects_ill_defined_matrix():
    with pytest.raises(InputError):
        AbHom(FinAbGroup((2,)), FinAbGroup((4,)), ((1,),))


def test_kernel_image_examples():
    f = AbHom.from_images(FinAbGroup((4,)), FinAbGroup((2,)), [(1,)])
    ker, im = kernel_image(f)
    assert ker.order == 2 and im.order == 2
    z = AbHom.zero(FinAbGroup((6,)), FinAbGroup((6,)))
    ker, im = kernel_image(z)
    assert ker.order == 6 and im.order == 1


def test_kernel_image_orders_multiply():
    rng = random.Random(2)
    for _ in range(300):
        a, b = rng.choice(GROUPS_32), rng.choice(GROUPS_32)
        hg = hom_group(a, b)
        f = hg.element_to_hom(tuple(rng.randrange(o) for o in hg.group.invariants))
        ker, im = kernel_image(f)
        assert ker.order * im.order == a.order
        assert ker.element_set == frozenset(x for x in a.elements() if not any(f(x)))
        assert im.element_set == frozenset(f(x) for x in a.elements())


def test_hom_from_values_rejects_inconsistent_values():
    g = FinAbGroup((4,))
    with pytest.raises(InvariantError):
        hom_from_values(g, g, [((1,), (1,)), ((2,), (1,))])


def test_group_gcd_examples():
    assert group_gcd([FinAbGroup((2, 4)), FinAbGroup((2, 2))]).invariants == (2,)
    assert group_gcd([FinAbGroup((2, 4)), FinAbGroup(())]).invariants == ()
    # 12 -> {4, 3} and 18 -> {2, 9} share no prime-power factor
    assert group_gcd([FinAbGroup((12,)), FinAbGroup((18,))]).invariants == ()
    with pytest.raises(InputError):
        group_gcd([])


def test_group_gcd_of_twelve_and_eighteen_by_brute_force():
    common = summand_signatures(FinAbGroup((12,))) & summand_signatures(FinAbGroup((18,)))
    assert common == {frozenset({1: 1}.items())}


def test_group_gcd_against_summand_search():
    rng = random.Random(4)
    small = [g for g in GROUPS_32 if g.order <= 32]
    for _ in range(60):
        a, b = rng.choice(small), rng.choice(small)
        gg = group_gcd([a, b])
        common = summand_signatures(a) & summand_signatures(b)
        own = frozenset(signature(gg, list(gg.elements())).items())
        assert own in common
        # every common summand type is a summand type of the gcd
        assert common <= summand_signatures(gg)


def test_split_cyclic_summand_examples():
    g = FinAbGroup((2, 4))
    r, comp = split_cyclic_summand(g, (1, 0))
    assert comp.order == 4 and r((1, 0)) == (1, 0)
    assert split_cyclic_summand(FinAbGroup((4,)), (2,)) is None
    res = split_cyclic_summand(g, (1, 1))
    assert res is not None
    r, comp = res
    assert comp.order == 2
    assert (1, 1) not in comp.element_set
    with pytest.raises(InputError):
        split_cyclic_summand(g, (0, 0))


def _retraction_exists(g: FinAbGroup, x) -> bool:
    span = sorted(oracles.closure(g, [x]))
    choices = []
    for o in g.invariants:
        choices.append([y for y in span if not any(g.scale(o, y))])
    for imgs in itertools.product(*choices):
        img = g.zero()
        for c, y in zip(x, imgs):
            img = g.add(img, g.scale(c, y))
        if img == x:
            return True
    return False


def test_split_cyclic_summand_against_retraction_search():
    for g in GROUPS_32:
        for x in g.elements():
            if not any(x):
                continue
            res = split_cyclic_summand(g, x)
            assert (res is not None) == _retraction_exists(g, x), (g, x)
            if res is not None:
                r, comp = res
                span = oracles.closure(g, [x])
                assert len(span & comp.element_set) == 1
                assert len(span) * comp.order == g.order


def test_automorphism_counts():
    def brute(g):
        elems = list(g.elements())
        count = 0
        choices = [[y for y in elems if not any(g.scale(o, y))] for o in g.invariants]
        for imgs in itertools.product(*choices):
            f = AbHom.from_images(g, g, list(imgs))
            if len({f(x) for x in elems}) == g.order:
                count += 1
        return count

    for inv in [(2,), (4,), (2, 2), (2, 4), (8,), (2, 2, 2), (6,)]:
        g = FinAbGroup(inv)
        assert len(automorphisms(g)) == brute(g)
    assert len(automorphisms(FinAbGroup((2, 2)))) == 6


def test_all_subgroups_matches_oracle():
    for inv in [(2, 2, 2), (2, 4), (4, 4), (12,), (2, 2, 4)]:
        g = FinAbGroup(inv)
        ours = {s.element_set for s in all_subgroups(g)}
        assert ours == set(oracles.subgroups(g))
    assert len(all_subgroups(FinAbGroup((2, 2, 2)))) == 16


def test_subgroup_equality_is_canonical():
    g = FinAbGroup((2, 4))
    a = Subgroup(g, [(1, 0), (0, 2)])
    b = Subgroup(g, [(1, 2), (1, 0)])
    assert a == b and hash(a) == hash(b)
    assert a.order == 4


def test_cyclic_product_normalizes():
    g, norm = cyclic_product([2, 3, 1])
    assert g.invariants == (6,)
    assert g.element_order(norm.normalize([1, 1, 0])) == 6


@settings(max_examples=200)
@given(st.sampled_from(GROUPS_32), st.data())
def test_group_operations_are_consistent(g, data):
    x = tuple(data.draw(st.integers(0, d - 1)) for d in g.invariants)
    y = tuple(data.draw(st.integers(0, d - 1)) for d in g.invariants)
    assert g.add(x, g.neg(x)) == g.zero()
    assert g.add(x, y) == g.add(y, x)
    o = g.element_order(x)
    assert not any(g.scale(o, x))
    assert all(any(g.scale(k, x)) for k in range(1, o))
