import random
from itertools import product

import pytest

from endslab.actions import PairPoint, check_action_axioms, orbit, translation_action, trivial_action
from endslab.balls import build_ball
from endslab.groups import Cyclic, CyclicInt, FreeAbelian, IntVector
from endslab.wreath import (
    WreathElement,
    WreathError,
    WreathGroup,
    head_projection_action,
    imprimitive_action,
    imprimitive_coset_action,
    lamplighter,
    standard_wreath_gens,
    wreath_inverse,
    wreath_multiply,
)
from endslab.actions import Sublattice, TrivialSubgroup

from oracles import (
    finite_wreath_elements,
    finite_wreath_multiply,
    lamplighter2_ball_sizes,
)


def regular_wreath(n, m):
    base, top = Cyclic(n), Cyclic(m)
    ta = translation_action(top)
    w = WreathGroup(base, top, ta, (ta.basepoint,))
    gens = standard_wreath_gens(w, base.standard_gens(), top.standard_gens())
    return w, gens


def to_library(w, n, m, el):
    """Convert an oracle element (tuple of base values, head) to a WreathElement."""
    phi, h = el
    support = frozenset((CyclicInt(m, x), CyclicInt(n, v))
                        for x, v in enumerate(phi) if v != 0)
    return WreathElement(support, CyclicInt(m, h))


@pytest.mark.parametrize("n,m", [(2, 2), (3, 2)])
def test_multiplication_against_definition_table(n, m):
    w, _ = regular_wreath(n, m)
    elements = finite_wreath_elements(n, m)
    for a, b in product(elements, repeat=2):
        expected = to_library(w, n, m, finite_wreath_multiply(n, m, a, b))
        got = wreath_multiply(w, to_library(w, n, m, a), to_library(w, n, m, b))
        assert got == expected, (a, b)


def test_same_site_merge():
    w, _ = regular_wreath(2, 2)
    x0 = w.top_action.basepoint
    d = w.delta(x0, CyclicInt(2, 1))
    assert wreath_multiply(w, d, d) == w.identity()  # s^2 = 1 in C(2)


def test_shifted_delta_law():
    # (1, t) * (delta_{x0}^s, 1) = (delta_{t.x0}^s, t)
    w, _ = regular_wreath(2, 2)
    x0 = w.top_action.basepoint
    s = CyclicInt(2, 1)
    t = w.top_element(CyclicInt(2, 1))
    d = w.delta(x0, s)
    prod = wreath_multiply(w, t, d)
    moved = w.top_action.act(t.head, x0)
    assert prod == WreathElement(frozenset([(moved, s)]), t.head)

    lamp, _ = lamplighter(2)
    x0 = lamp.top_action.basepoint
    t = lamp.top_element(IntVector((1,)))
    d = lamp.delta(x0, CyclicInt(2, 1))
    prod = wreath_multiply(lamp, t, d)
    assert prod == WreathElement(frozenset([(IntVector((1,)), CyclicInt(2, 1))]),
                                 IntVector((1,)))


def test_inverse_examples():
    w, _ = regular_wreath(3, 2)
    t = w.top_element(CyclicInt(2, 1))
    assert wreath_inverse(w, t) == w.top_element(CyclicInt(2, 1))
    d = w.delta(w.top_action.basepoint, CyclicInt(3, 1))
    assert wreath_inverse(w, d) == w.delta(w.top_action.basepoint, CyclicInt(3, 2))

    lamp, _ = lamplighter(2)
    a = WreathElement(frozenset([(IntVector((0,)), CyclicInt(2, 1))]),
                      IntVector((1,)))
    inv = wreath_inverse(lamp, a)
    assert inv == WreathElement(frozenset([(IntVector((-1,)), CyclicInt(2, 1))]),
                                IntVector((-1,)))
    assert wreath_multiply(lamp, a, inv) == lamp.identity()


def sample_wreath_element(w, rng, sites):
    el = w.identity()
    for _ in range(rng.randrange(5)):
        if rng.random() < 0.5:
            el = w.multiply(el, w.delta(rng.choice(sites),
                                        CyclicInt(w.base.modulus,
                                                  rng.randrange(1, w.base.modulus))))
        else:
            el = w.multiply(el, w.top_element(
                CyclicInt(w.top.modulus, rng.randrange(w.top.modulus))))
    return el


def test_wreath_group_axioms_random():
    w, _ = regular_wreath(3, 4)
    sites = list(Cyclic(4).elements())
    rng = random.Random(13)
    for _ in range(300):
        a, b, c = (sample_wreath_element(w, rng, sites) for _ in range(3))
        assert w.multiply(w.multiply(a, b), c) == w.multiply(a, w.multiply(b, c))
        assert w.multiply(a, w.inverse(a)) == w.identity()
        assert w.inverse(w.inverse(a)) == a


def test_top_action_is_by_automorphisms():
    # h.(fg) = (h.f)(h.g) where the base-sum product is pointwise
    w, _ = regular_wreath(3, 4)
    sites = list(Cyclic(4).elements())
    rng = random.Random(17)
    for _ in range(100):
        f = sample_wreath_element(w, rng, sites)
        g = sample_wreath_element(w, rng, sites)
        f = WreathElement(f.support, w.top.identity())
        g = WreathElement(g.support, w.top.identity())
        h = CyclicInt(4, rng.randrange(4))
        lhs = w.shift(h, w.multiply(f, g))
        rhs = w.multiply(w.shift(h, f), w.shift(h, g))
        assert lhs == rhs


def test_standard_gens_lamplighter_shape():
    w, gens = lamplighter(2)
    assert len(gens) == 3
    assert gens.pairing == (0, 2, 1)  # delta self-paired, +-1 swapped
    assert gens.elements[0] == w.delta(IntVector((0,)), CyclicInt(2, 1))


def test_standard_gens_pass_gen_set_invariants():
    from endslab.groups import verify_gen_set
    w, gens = lamplighter(3)
    verify_gen_set(w, gens)
    w2, gens2 = regular_wreath(3, 4)
    verify_gen_set(w2, gens2)


def test_singleton_wreath_is_direct_product():
    base, top = Cyclic(2), Cyclic(3)
    w = WreathGroup(base, top, trivial_action(top), (0,))
    gens = standard_wreath_gens(w, base.standard_gens(), top.standard_gens())
    res = orbit(translation_action(w), gens, 100)
    assert len(res) == 6  # |C2 x C3|


@pytest.mark.parametrize("n,m,total", [(2, 2, 8), (3, 2, 18)])
def test_finite_wreath_enumeration(n, m, total):
    w, gens = regular_wreath(n, m)
    res = orbit(translation_action(w), gens, 1000)
    assert len(res) == total and not res.truncated


def test_orbit_reps_distinctness_is_checked():
    top = Cyclic(4)
    ta = translation_action(top)
    with pytest.raises(WreathError):
        WreathGroup(Cyclic(2), top, ta, (CyclicInt(4, 0), CyclicInt(4, 2)))


def test_imprimitive_edge_rules_verbatim():
    w, gens = regular_wreath(3, 2)
    x0 = w.top_action.basepoint
    action = imprimitive_action(w, x0)
    points = [PairPoint(g, x) for g in Cyclic(3).elements()
              for x in Cyclic(2).elements()]
    for t in (CyclicInt(2, 0), CyclicInt(2, 1)):
        el = w.top_element(t)
        for p in points:
            assert action.act(el, p) == PairPoint(p.leaf,
                                                  w.top_action.act(t, p.pos))
    for s in (CyclicInt(3, 1), CyclicInt(3, 2)):
        el = w.delta(x0, s)
        for p in points:
            got = action.act(el, p)
            if p.pos == x0:
                assert got == PairPoint(w.base.multiply(s, p.leaf), p.pos)
            else:
                assert got == p


def test_imprimitive_transitive_and_axioms():
    w, gens = regular_wreath(3, 2)
    action = imprimitive_action(w, w.top_action.basepoint)
    res = orbit(action, gens, 100)
    assert len(res) == 6
    rng = random.Random(23)
    sites = list(Cyclic(2).elements())
    elements = [sample_wreath_element(w, rng, sites) for _ in range(6)]
    check_action_axioms(action, elements, list(res.points))


def test_imprimitive_bad_rep_rejected():
    w, _ = regular_wreath(3, 2)
    with pytest.raises(WreathError):
        imprimitive_action(w, CyclicInt(2, 1))


def test_imprimitive_coset_action_examples():
    # base Z, K = 3Z, H = C(2) regular: orbit has 6 points
    base, top = FreeAbelian(1), Cyclic(2)
    ta = translation_action(top)
    w = WreathGroup(base, top, ta, (ta.basepoint,))
    gens = standard_wreath_gens(w, base.standard_gens(), top.standard_gens())
    action = imprimitive_coset_action(w, Sublattice(((3,),)), ta.basepoint)
    res = orbit(action, gens, 100)
    assert len(res) == 6 and not res.truncated

    # trivial K coincides pointwise with the plain imprimitive action
    triv = imprimitive_coset_action(w, TrivialSubgroup(), ta.basepoint)
    plain = imprimitive_action(w, ta.basepoint)
    space_key = triv.basepoint.leaf.space_key
    rng = random.Random(3)
    els = list(gens.elements)
    sample = [plain.basepoint]
    for _ in range(20):
        sample.append(plain.act(rng.choice(els), rng.choice(sample)))
    from endslab.actions import CosetPoint
    for g in els:
        for p in sample:
            lifted = PairPoint(CosetPoint(p.leaf, space_key), p.pos)
            got = triv.act(g, lifted)
            want = plain.act(g, p)
            assert got.leaf.rep == want.leaf and got.pos == want.pos

    # K = full group: the leaf direction collapses to the orbit X'
    full = imprimitive_coset_action(w, Sublattice(((1,),)), ta.basepoint)
    res = orbit(full, gens, 100)
    assert len(res) == 2


def test_head_projection_action():
    w, gens = lamplighter(2)
    action = head_projection_action(w)
    # delta generators act trivially, top generators translate
    assert action.act(gens.elements[0], IntVector((3,))) == IntVector((3,))
    assert action.act(gens.elements[1], IntVector((3,))) == IntVector((4,))


def test_lamplighter_constructor():
    with pytest.raises(WreathError):
        lamplighter(1)
    w, gens = lamplighter(2)
    sizes = [len(build_ball(translation_action(w), gens, r)) for r in range(4)]
    # golden values from the lit-lamp-set model
    assert lamplighter2_ball_sizes(3) == [1, 4, 10, 22]
    assert sizes == [1, 4, 10, 22]
    assert all(a < b for a, b in zip(sizes, sizes[1:]))
