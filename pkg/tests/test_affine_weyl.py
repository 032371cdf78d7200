import random

import pytest

from fincox.affine_weyl import cayley_ball, reduced_word_oracle
from fincox.root_system import build_root_system

from conftest import make_group, random_element

TYPES_UPTO_8 = [("A", n) for n in range(1, 9)] + [("B", n) for n in range(2, 9)] + [
    ("C", n) for n in range(2, 9)] + [("D", n) for n in range(4, 9)] + [
    ("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
TWISTED = [("A", n, "flip") for n in range(2, 8)] + [("D", n, "flip") for n in range(4, 8)] + [
    ("D", 4, "triality"), ("E", 6, "flip")]


def test_generators():
    g = make_group("A", 2)
    s0 = g.simple_reflection(0)
    assert s0.length() == 1
    assert g.multiply(s0, s0) == g.identity()
    for i in g.nodes:
        assert g.simple_reflection(i).length() == 1
    assert g.identity().length() == 0


def test_multiplication_examples():
    g = make_group("A", 2)
    assert g.multiply(g.translation([1, 0]), g.translation([2, -1])) == g.translation([3, -1])
    theta_v = g.rs.highest_coroot
    s_theta = g.multiply(g.translation([-v for v in theta_v]), g.simple_reflection(0))
    assert s_theta.chi.tolist() == [0, 0]
    lhs = g.product(s_theta, g.translation(theta_v), s_theta)
    assert lhs == g.translation([-v for v in theta_v])


def test_length_examples():
    g = make_group("A", 2)
    alpha1 = g.rs.simple_coroot(1)
    assert g.translation(alpha1).length() == 4
    assert len(reduced_word_oracle(g.translation(alpha1))) == 4
    theta = g.translation(g.rs.highest_coroot)
    assert len(reduced_word_oracle(theta)) == 4 == theta.length()
    assert reduced_word_oracle(g.identity()) == []
    assert reduced_word_oracle(g.simple_reflection(0)) == [0]


@pytest.mark.parametrize("t,n,radius", [("A", 2, 8), ("C", 2, 8), ("A", 3, 6), ("G", 2, 7), ("B", 3, 5)])
def test_length_formula_against_word_balls(t, n, radius):
    g = make_group(t, n)
    ball = cayley_ball(g, radius)
    for x, d in ball.items():
        assert x.length() == d


def test_ball_sizes():
    # growth series of affine A2 starts 1, 3, 6, 9, 12, ...
    ball = cayley_ball(make_group("A", 2), 4)
    counts = [sum(1 for d in ball.values() if d == r) for r in range(5)]
    assert counts == [1, 3, 6, 9, 12]


@pytest.mark.parametrize("t,n,tw", [("A", 2, "id"), ("C", 3, "id"), ("D", 4, "triality"), ("E", 6, "flip")])
def test_reduced_word_reconstructs(t, n, tw):
    g = make_group(t, n, tw)
    rng = random.Random(3)
    for _ in range(200):
        x = random_element(g, rng, 12)
        word, rest = g.reduced_word(x)
        assert len(word) == x.length()
        assert rest.length() == 0
        assert g.multiply(g.from_word(word), rest) == x


@pytest.mark.parametrize("t,n,tw", [("A", 3, "id"), ("B", 4, "id"), ("D", 5, "flip"), ("E", 6, "flip"), ("G", 2, "id")])
def test_length_parity_under_simple_conjugation(t, n, tw):
    g = make_group(t, n, tw)
    rng = random.Random(17)
    for _ in range(2000):
        x = random_element(g, rng, 14)
        i = rng.choice(g.nodes)
        diff = g.simple_conjugate(i, x).length() - x.length()
        assert diff in (-2, 0, 2)


@pytest.mark.parametrize("t,n", TYPES_UPTO_8)
def test_omega_length_zero_and_cardinality(t, n):
    g = make_group(t, n)
    om = g.omega_group()
    assert len(om) == g.rs.cartan_determinant
    assert len({o.element for o in om}) == len(om)
    for o in om:
        assert o.element.length() == 0
        perm = g.node_permutation(o)
        assert sorted(perm.values()) == list(g.nodes)
        for j in g.nodes:
            conj = g.conjugate(o.element, g.simple_reflection(j))
            assert conj == g.simple_reflection(perm[j])
    # closed under multiplication
    keys = {o.element for o in om}
    for a in om:
        for b in om:
            assert g.multiply(a.element, b.element) in keys


@pytest.mark.parametrize("t,n,tw", TWISTED)
def test_twisted_omega(t, n, tw):
    g = make_group(t, n, tw)
    om = g.omega_group(with_delta=True)
    assert len(om) == g.rs.cartan_determinant * g.delta_order
    for o in om:
        assert o.element.length() == 0
        perm = g.node_permutation(o)
        assert sorted(perm.values()) == list(g.nodes)
        assert g.as_omega(o.element) == o


def test_omega_examples():
    a1 = make_group("A", 1)
    om = {o.element for o in a1.omega_group()}
    assert om == {a1.identity(), a1.multiply(a1.translation([1]), a1.simple_reflection(1))}
    assert [o.element for o in make_group("E", 8).omega_group()] == [make_group("E", 8).identity()]
    assert len(make_group("D", 4).omega_group()) == 4


@pytest.mark.parametrize("t,n,tw", [("A", 2, "id"), ("B", 3, "id"), ("A", 3, "flip"), ("D", 4, "triality")])
def test_eta_is_class_compatible(t, n, tw):
    g = make_group(t, n, tw)
    W = g.finite
    rng = random.Random(5)
    for _ in range(150):
        x = random_element(g, rng, 8)
        h = random_element(g, rng, 8)
        assert g.eta(g.multiply(h, x)) == W.multiply(g.eta(h), g.eta(x))
        # conjugators from W~ (no delta factor) give W0-conjugate finite parts
        h = g.multiply(g.from_word([rng.choice(g.nodes) for _ in range(8)]), rng.choice(g.omega_group()).element)
        assert W.is_conjugate(g.eta(g.conjugate(h, x)), g.eta(x))


def test_eta_examples():
    g = make_group("A", 3, "flip")
    assert g.eta(g.translation([1, 2, 3])) == g.finite.identity()
    x = g.product(g.translation([1, 0, 0]), g.simple_reflection(2), g.delta_element())
    assert g.eta(x) == g.finite.from_word([2], 1)


def test_simple_conjugate_examples():
    g = make_group("A", 2)
    assert g.simple_conjugate(1, g.identity()) == g.identity()
    assert g.simple_conjugate(1, g.from_word([1, 2])) == g.from_word([2, 1])
    x = g.make([1, 0], g.finite.from_word([1, 2]))
    s0 = g.simple_reflection(0)
    assert g.simple_conjugate(0, x) == g.product(s0, x, s0)


def test_support_examples():
    g = make_group("A", 2)
    e = g.tau(None)
    assert g.support(g.identity(), e) == frozenset()
    assert g.support(g.from_word([0, 2]), e) == {0, 2}
    b3 = make_group("B", 3)
    tau = b3.tau(1)
    x = b3.multiply(tau.element, b3.from_word([1, 2]))
    assert b3.support(x, tau) == {0, 1, 2}
    with pytest.raises(ValueError):
        b3.support(x, e_of(b3))


def e_of(g):
    return g.tau(None)


@pytest.mark.parametrize("t,n,tw", [("A", 3, "id"), ("C", 3, "id"), ("D", 4, "triality"), ("E", 6, "flip")])
def test_text_round_trip(t, n, tw):
    g = make_group(t, n, tw)
    rng = random.Random(9)
    for _ in range(200):
        x = random_element(g, rng, 10)
        assert g.parse(str(x)) == x
        assert g.parse(g.affine_word_text(x)) == x
    assert str(g.identity()) == "e"
    assert g.parse("e") == g.identity()
    with pytest.raises(ValueError):
        g.parse("s1 q7")


def test_power_and_order():
    g = make_group("A", 2)
    x = g.make(g.rs.fundamental_coweight(1), g.finite.from_word([1, 2]))
    assert g.power(x, 3) == g.identity()
    wit = g.is_finite_order(x)
    assert wit.finite and wit.order_of_finite_part == 3
    c = g.from_word([0, 1, 2])
    wit = g.is_finite_order(c)
    assert not wit.finite and wit.order_of_finite_part == 2 and any(wit.translation)
    assert g.is_finite_order(g.identity()).order_of_finite_part == 1
    rng = random.Random(2)
    for _ in range(50):
        y = random_element(g, rng, 6)
        n = rng.randint(0, 9)
        slow = g.identity()
        for _ in range(n):
            slow = g.multiply(slow, y)
        assert g.power(y, n) == slow
        assert g.power(y, -n) == g.inverse(slow)


def test_group_axioms_random():
    for t, n, tw in [("A", 3, "id"), ("B", 3, "id"), ("D", 4, "triality"), ("E", 6, "flip"), ("G", 2, "id")]:
        g = make_group(t, n, tw)
        rng = random.Random(n)
        for _ in range(300):
            a, b, c = (random_element(g, rng, 8) for _ in range(3))
            assert g.product(a, b, c) == g.multiply(a, g.multiply(b, c))
            assert g.multiply(a, g.inverse(a)) == g.identity()
            assert g.inverse(a).length() == a.length()


def test_mixed_groups_rejected():
    a = make_group("A", 2)
    b = make_group("B", 2)
    with pytest.raises(ValueError):
        a.multiply(a.identity(), b.simple_reflection(1))
    with pytest.raises(ValueError):
        a.translation([1, 2, 3])
    with pytest.raises(ValueError):
        a.from_word([3])


def test_tau_matches_definition():
    rs = build_root_system("D", 5)
    g = make_group("D", 5)
    with pytest.raises(ValueError):
        g.tau(2)
    for i in rs.minuscule_indices:
        t = g.tau(i).element
        assert t.chi.tolist() == list(rs.fundamental_coweight(i))
        assert t.length() == 0
