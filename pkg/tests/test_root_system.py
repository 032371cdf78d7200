import itertools

import numpy as np
import pytest

from fincox.root_system import (
    RootSystemError,
    build_root_system,
    cartan_matrix,
    pairing,
    twist_permutation,
)

ALL_TYPES = [("A", n) for n in range(1, 9)] + [("B", n) for n in range(2, 9)] + [
    ("C", n) for n in range(2, 9)] + [("D", n) for n in range(4, 9)] + [
    ("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]


def _root_string_closure(cartan):
    """Positive roots by root strings: beta + alpha_i is a root iff p - <beta, alpha_i^vee> > 0."""
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                pair = sum(cartan[i][j] * beta[j] for j in range(n))
                if p - pair > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    return roots


def _expected_count(t, n):
    return {"A": n * (n + 1) // 2, "B": n * n, "C": n * n, "D": n * (n - 1),
            "E": {6: 36, 7: 63, 8: 120}.get(n), "F": 24, "G": 6}[t]


@pytest.mark.parametrize("t,n", ALL_TYPES)
def test_roots_match_root_strings(t, n):
    rs = build_root_system(t, n)
    assert set(rs.positive_roots) == _root_string_closure(rs.cartan)
    assert len(rs.positive_roots) == _expected_count(t, n)


@pytest.mark.parametrize("t,n", ALL_TYPES)
def test_structural_invariants(t, n):
    rs = build_root_system(t, n)
    C = np.array(rs.cartan)
    assert all(C[i, i] == 2 for i in range(n))
    # theta dominates every root coefficientwise and is itself a root
    assert rs.is_root(rs.highest_root)
    for a in rs.positive_roots:
        assert all(x <= y for x, y in zip(a, rs.highest_root))
    # coroots (in fundamental coweights) pair to 2 with their roots; the
    # reflection s_a(b) = b - <a^vee, b> a permutes the roots
    roots = set(rs.positive_roots) | {tuple(-x for x in a) for a in rs.positive_roots}
    for a, av in zip(rs.positive_roots, rs.positive_coroots):
        assert pairing(av, a) == 2
        for b in rs.positive_roots:
            img = tuple(y - pairing(av, b) * x for x, y in zip(a, b))
            assert img in roots
    # minuscule coweights are the nodes where theta has coefficient 1
    assert rs.minuscule_indices == frozenset(i + 1 for i, c in enumerate(rs.highest_root) if c == 1)
    assert rs.cartan_determinant == round(np.linalg.det(C))


@pytest.mark.parametrize("t,n", [(t, n) for t, n in ALL_TYPES if n <= 6])
def test_diagram_automorphisms_brute_force(t, n):
    rs = build_root_system(t, n)
    expected = {
        p for p in itertools.permutations(range(1, n + 1))
        if all(rs.cartan[p[i] - 1][p[j] - 1] == rs.cartan[i][j] for i in range(n) for j in range(n))
    }
    assert set(rs.diagram_autos) == expected


def test_examples():
    a2 = build_root_system("A", 2)
    assert set(a2.positive_roots) == {(1, 0), (0, 1), (1, 1)}
    assert a2.highest_root == (1, 1)
    a1 = build_root_system("A", 1)
    assert a1.positive_roots == ((1,),) and a1.highest_root == (1,)
    assert len(build_root_system("D", 4).diagram_autos) == 6


def test_pairing_examples():
    a2 = build_root_system("A", 2)
    assert pairing((1, 0), (1, 0)) == 1
    alpha1_vee = a2.simple_coroot(1)
    assert alpha1_vee == (2, -1)
    assert pairing(alpha1_vee, (0, 1)) == -1
    assert pairing(alpha1_vee, a2.highest_root) == 1
    with pytest.raises(ValueError):
        pairing((1, 0), (1, 0, 0))


def test_minuscule_sets():
    for n in range(2, 8):
        assert build_root_system("B", n).minuscule_indices == {1}
        assert build_root_system("C", n).minuscule_indices == {n}
        assert build_root_system("A", n).minuscule_indices == set(range(1, n + 1))
    for n in range(4, 8):
        assert build_root_system("D", n).minuscule_indices == {1, n - 1, n}
    assert build_root_system("E", 6).minuscule_indices == {1, 6}
    assert build_root_system("E", 7).minuscule_indices == {7}
    for t, n in [("E", 8), ("F", 4), ("G", 2)]:
        assert build_root_system(t, n).minuscule_indices == frozenset()


def test_determinants():
    for n in range(1, 8):
        assert build_root_system("A", n).cartan_determinant == n + 1
    for n in range(4, 8):
        assert build_root_system("D", n).cartan_determinant == 4
    assert build_root_system("E", 6).cartan_determinant == 3
    assert build_root_system("E", 7).cartan_determinant == 2
    assert build_root_system("E", 8).cartan_determinant == 1


@pytest.mark.parametrize("t,n", [("A", 0), ("B", 1), ("D", 3), ("E", 5), ("F", 3), ("H", 3), ("A", 9)])
def test_invalid_types_rejected(t, n):
    with pytest.raises(RootSystemError):
        build_root_system(t, n)


def test_twists():
    d4 = build_root_system("D", 4)
    assert twist_permutation(d4, "triality") == (3, 2, 4, 1)
    assert twist_permutation(build_root_system("E", 6), "flip") == (6, 2, 5, 4, 3, 1)
    with pytest.raises(RootSystemError):
        twist_permutation(build_root_system("B", 3), "flip")
    with pytest.raises(RootSystemError):
        twist_permutation(d4, "nonsense")


def test_cartan_convention():
    # B2: alpha_2 short, so <alpha_1^vee, alpha_2> = -1 and <alpha_2^vee, alpha_1> = -2
    assert cartan_matrix("B", 2) == ((2, -1), (-2, 2))
    assert build_root_system("B", 2).highest_root == (1, 2)
    assert build_root_system("C", 2).highest_root == (2, 1)
