import json
from importlib import resources

import pytest

from fincox.case_tables import (
    ENTRY_CHECKS,
    CaseEntry,
    derive_entry,
    entry_element,
    generate_type_a_fixture,
    image_entry,
    load_type_a_fixture,
    render_table,
    table_entries,
    verify_entry,
)
from fincox.root_system import RootSystemError, build_root_system

from conftest import make_group

SCOPE = (
    [("A", n, "flip") for n in range(2, 8)]
    + [("B", n, "id") for n in range(2, 8)]
    + [("C", n, "id") for n in range(2, 8)]
    + [("D", n, "id") for n in range(4, 8)]
    + [("D", n, "flip") for n in range(4, 8)]
    + [("D", 4, "triality"), ("E", 6, "id"), ("E", 6, "flip"), ("E", 7, "id")]
    + [("A", n, "id") for n in range(1, 8)]
)


@pytest.mark.parametrize("t,n,tw", SCOPE)
def test_every_row_passes(t, n, tw):
    for e in table_entries(t, n, tw):
        r = verify_entry(e)
        assert list(r.checks) == list(ENTRY_CHECKS)
        assert r.passed, (e.label, r.checks, r.computed_orbits, r.computed_support)
        assert r.J_maximal
        assert set(e.c_word) <= set(range(1, n + 1))


@pytest.mark.parametrize("t,n,tw", SCOPE)
def test_one_row_per_minuscule_index(t, n, tw):
    rs = build_root_system(t, n)
    rows = table_entries(t, n, tw)
    assert sorted(e.index for e in rows) == sorted(rs.minuscule_indices)


@pytest.mark.parametrize("n", range(2, 8))
def test_twisted_a_guards(n):
    r = n + 1
    for e in table_entries("A", n, "flip"):
        odd_n, odd_i = r % 2 == 1, e.index % 2 == 1
        expected = {(True, True): "case 1", (True, False): "case 2", (False, True): "case 3", (False, False): "case 4"}
        assert e.parity_case.startswith(expected[(odd_n, odd_i)])


@pytest.mark.parametrize("n", range(4, 8))
def test_d_symmetry(n):
    for tw in ("id", "flip"):
        rows = {e.index: e for e in table_entries("D", n, tw)}
        swap = tuple(range(1, n - 1)) + (n, n - 1)
        assert rows[n - 1] == image_entry(rows[n], swap, n - 1)
    # the swap is delta of 2D_n: conjugating the tau_n witness by it gives the tau_{n-1} witness
    g = make_group("D", n, "flip")
    rows = {e.index: e for e in table_entries("D", n, "id")}
    _, x_n = entry_element(rows[n], g)
    _, x_m = entry_element(rows[n - 1], g)
    assert g.conjugate(g.delta_element(), x_n) == x_m


def test_transcribed_examples():
    (b,) = table_entries("B", 5)
    assert b.J == frozenset(range(5)) and b.c_word == (1, 2, 3, 4)
    (c,) = table_entries("C", 6)
    assert c.J == frozenset(range(7)) - {3} and c.c_word == (4, 5, 6)
    tri = next(e for e in table_entries("D", 4, "triality") if e.index == 1)
    assert tri.orbits == {frozenset({0, 1, 4}), frozenset({2}), frozenset({3})}
    assert tri.J == {0, 1, 2, 4} and tri.c_word == (2, 1)
    (e7,) = table_entries("E", 7)
    assert e7.J == frozenset(range(1, 7)) and e7.c_word == (2, 4, 5, 6)
    a = next(e for e in table_entries("A", 3, "flip") if e.index == 2)
    assert a.J == {0, 1, 2} and a.c_word == (1, 2)
    e6 = next(e for e in table_entries("E", 6, "flip") if e.index == 1)
    assert e6.J == frozenset(range(6)) and e6.c_word == (5, 4, 3, 1)


def test_out_of_scope_rejected():
    with pytest.raises(RootSystemError):
        table_entries("B", 3, "flip")
    with pytest.raises(RootSystemError):
        table_entries("D", 3)
    assert table_entries("E", 8) == [] and table_entries("F", 4) == [] and table_entries("G", 2) == []


def test_bad_row_is_reported_not_raised():
    good = table_entries("B", 3)[0]
    bad = CaseEntry(good.type_letter, good.rank, good.twist, good.index, "", good.orbits,
                    good.J, (1, 3))
    r = verify_entry(bad)
    assert not r.passed and r.checks["tau_length_zero"] and r.checks["orbits_match"]
    assert not r.checks["support_is_J"]


def test_derive_entry_small_cases():
    # tau_1 acts transitively on the affine nodes of A1 and A2: only J = {} is proper and stable
    for n in (1, 2):
        e = derive_entry("A", n, 1)
        assert e.J == frozenset() and e.c_word == ()
        assert verify_entry(e).passed
    e = derive_entry("A", 3, 2)
    assert verify_entry(e).passed
    assert e.J == {1, 3}


def test_fixture_regenerates_with_same_checksum():
    stored = json.loads(resources.files("fincox.data").joinpath("type_a_entries.json").read_text())
    fresh = generate_type_a_fixture(7)
    assert fresh["sha256"] == stored["sha256"]
    assert fresh["entries"] == stored["entries"]
    assert [e.to_dict() for e in load_type_a_fixture()] == stored["entries"]


def test_entry_serialisation_round_trip():
    for e in table_entries("D", 5, "flip") + table_entries("A", 4):
        assert CaseEntry.from_dict(json.loads(json.dumps(e.to_dict()))) == e


def test_render_table():
    text = render_table([verify_entry(e) for e in table_entries("D", 4, "triality")])
    lines = text.splitlines()
    assert lines[0].split()[:4] == ["row", "case", "J", "c"]
    assert len(lines) == 4
    assert "FAIL" not in text
