"""Witness table for the key lemma: one row per (type, twist, minuscule index).

Each row names a length-zero ``tau = tau_i``, a twist ``delta'``, the expected
``tau delta'``-orbits on S~, a maximal proper stable ``J`` and ``c`` in W0 such that
``tau delta' c`` is a Coxeter element of ``W_J x| <tau delta'>`` whose finite part
is conjugate to a Coxeter element of W0'.  Rows are transcribed for every type
except untwisted A, where they are found by search and frozen in a fixture.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable

from .affine_weyl import AffineElement, AffineWeylGroup, OmegaElement
from .conjugacy import has_finite_coxeter_part, is_maximal_proper, parabolic_coxeter_elements
from .finite_weyl import orbits
from .root_system import RootSystemError, build_root_system, twist_permutation

__all__ = [
    "CaseEntry",
    "EntryVerification",
    "table_entries",
    "verify_entry",
    "derive_entry",
    "image_entry",
    "class_representative",
    "coset_class_representatives",
    "load_type_a_fixture",
    "generate_type_a_fixture",
    "render_table",
]

ENTRY_CHECKS = ("tau_length_zero", "orbits_match", "support_is_J", "finite_part_coxeter", "is_parabolic_coxeter")


@dataclass(frozen=True)
class CaseEntry:
    type_letter: str
    rank: int
    twist: str
    index: int | None
    parity_case: str
    orbits: frozenset[frozenset[int]]
    J: frozenset[int]
    c_word: tuple[int, ...]

    @property
    def label(self) -> str:
        prefix = {"id": "", "flip": "2", "triality": "3"}[self.twist]
        return f"{prefix}{self.type_letter}{self.rank} tau{self.index}"

    def group(self) -> AffineWeylGroup:
        return _group(self.type_letter, self.rank, self.twist)

    def to_dict(self) -> dict:
        return {
            "type": self.type_letter,
            "rank": self.rank,
            "twist": self.twist,
            "index": self.index,
            "case": self.parity_case,
            "orbits": sorted(sorted(o) for o in self.orbits),
            "J": sorted(self.J),
            "c": list(self.c_word),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CaseEntry":
        return cls(
            d["type"], d["rank"], d["twist"], d["index"], d["case"],
            frozenset(frozenset(o) for o in d["orbits"]), frozenset(d["J"]), tuple(d["c"]),
        )


@lru_cache(maxsize=None)
def _group(type_letter: str, rank: int, twist: str) -> AffineWeylGroup:
    rs = build_root_system(type_letter, rank)
    return AffineWeylGroup(rs, twist_permutation(rs, twist))


def _span(a: int, b: int) -> tuple[int, ...]:
    return tuple(range(a, b + 1))


def _parts(*groups) -> frozenset[frozenset[int]]:
    return frozenset(frozenset(g) for g in groups if g)


def _all_but(n_nodes: int, *removed: int) -> frozenset[int]:
    return frozenset(range(n_nodes + 1)) - set(removed)


# Each builder takes (n, i) and returns (parity_case, orbits, J, c_word) or None when
# its guard does not hold.

Row = tuple[str, frozenset, frozenset, tuple]


def _twisted_a(r: int, i: int) -> Row:
    n = r + 1
    orbs = [{0, i}] + [{j, i - j} for j in range(1, i)] + [{i + j, n - j} for j in range(1, n - i)]
    orbs = _parts(*orbs)
    if n % 2 and i % 2:
        return ("case 1: n odd, i odd", orbs, _all_but(r, (n + i) // 2), _span((i + 1) // 2, (n + i) // 2 - 1))
    if n % 2:
        return ("case 2: n odd, i even", orbs, _all_but(r, i // 2), _span(i // 2 + 1, (n + i - 1) // 2))
    if i % 2:
        return (
            "case 3: n even, i odd", orbs, _all_but(r, (i - 1) // 2, (i + 1) // 2),
            _span((i + 3) // 2, (n + i - 1) // 2),
        )
    return ("case 4: n even, i even", orbs, _all_but(r, (n + i) // 2), _span(i // 2, (n + i) // 2 - 1))


def _b(n: int, i: int) -> Row:
    return ("", _parts({0, 1}, *({k} for k in range(2, n + 1))), _all_but(n, n), _span(1, n - 1))


def _c(n: int, i: int) -> Row:
    orbs = _parts(*({k, n - k} for k in range(n + 1)))
    if n % 2:
        return ("n odd", orbs, _all_but(n, 0, n), _span((n + 1) // 2, n - 1))
    return ("n even", orbs, _all_but(n, n // 2), _span(n // 2 + 1, n))


def _d(n: int, i: int) -> Row | None:
    if i == 1:
        orbs = _parts({0, 1}, {n - 1, n}, *({k} for k in range(2, n - 1)))
        return ("case 1: tau_1", orbs, _all_but(n, n - 1, n), _span(1, n - 2))
    if i != n:
        return None
    if n % 2:
        orbs = _parts({0, n, 1, n - 1}, *({k, n - k} for k in range(2, (n - 1) // 2 + 1)))
        return (
            "case 2: tau_n, n odd", orbs, _all_but(n, (n - 1) // 2, (n + 1) // 2),
            _span((n + 3) // 2, n - 2) + (n,),
        )
    orbs = _parts(*({k, n - k} for k in range(n // 2 + 1)))
    return ("case 3: tau_n, n even", orbs, _all_but(n, 0, n), _span(n // 2, n - 1))


def _twisted_d(n: int, i: int) -> Row | None:
    if i == 1:
        return ("case 1: tau_1", _parts({0, 1}, *({k} for k in range(2, n + 1))), _all_but(n, n), _span(1, n - 1))
    if i != n:
        return None
    if n % 2:
        orbs = _parts(*({k, n - k} for k in range((n - 1) // 2 + 1)))
        return ("case 2: tau_n, n odd", orbs, _all_but(n, 0, n), _span((n + 1) // 2, n - 1))
    orbs = _parts({0, 1, n - 1, n}, *({k, n - k} for k in range(2, n // 2 + 1)))
    return ("case 3: tau_n, n even", orbs, _all_but(n, n // 2), _span(n // 2 + 1, n - 1))


def _triality_d4(n: int, i: int) -> Row | None:
    if i != 1:
        return None
    return ("", _parts({0, 1, 4}, {2}, {3}), _all_but(4, 3), (2, 1))


def _e6(n: int, i: int) -> Row | None:
    if i != 1:
        return None
    return ("", _parts({0, 1, 6}, {2, 3, 5}, {4}), _all_but(6, 0, 1, 6), (4, 5))


def _twisted_e6(n: int, i: int) -> Row | None:
    if i != 1:
        return None
    return ("", _parts({0, 1}, {2, 3}, {4}, {5}, {6}), _all_but(6, 6), (5, 4, 3, 1))


def _e7(n: int, i: int) -> Row | None:
    return ("", _parts({0, 7}, {1, 6}, {3, 5}, {2}, {4}), _all_but(7, 0, 7), (2, 4, 5, 6))


# (type, twist) -> (builder, {index: (source index, symmetry twist)} for rows obtained
# by transporting another row along a diagram automorphism)
_TABLE: dict[tuple[str, str], tuple[Callable, Callable[[int], dict[int, tuple[int, tuple]]]]] = {
    ("A", "flip"): (_twisted_a, lambda n: {}),
    ("B", "id"): (_b, lambda n: {}),
    ("C", "id"): (_c, lambda n: {}),
    ("D", "id"): (_d, lambda n: {n - 1: (n, tuple(range(1, n - 1)) + (n, n - 1))}),
    ("D", "flip"): (_twisted_d, lambda n: {n - 1: (n, tuple(range(1, n - 1)) + (n, n - 1))}),
    ("D", "triality"): (_triality_d4, lambda n: {3: (1, (3, 2, 4, 1)), 4: (1, (4, 2, 1, 3))}),
    ("E", "id"): (
        lambda n, i: _e6(n, i) if n == 6 else _e7(n, i),
        lambda n: {6: (1, (6, 2, 5, 4, 3, 1))} if n == 6 else {},
    ),
    ("E", "flip"): (_twisted_e6, lambda n: {6: (1, (6, 2, 5, 4, 3, 1))}),
}


def image_entry(e: CaseEntry, perm: tuple[int, ...], index: int) -> CaseEntry:
    """Transport a row along a diagram automorphism (fixing the affine node)."""
    f = {0: 0, **{k + 1: v for k, v in enumerate(perm)}}
    return CaseEntry(
        e.type_letter, e.rank, e.twist, index,
        f"image of tau_{e.index} under {perm}",
        frozenset(frozenset(f[x] for x in o) for o in e.orbits),
        frozenset(f[x] for x in e.J),
        tuple(f[x] for x in e.c_word),
    )


def table_entries(type_letter: str, rank: int, twist: str = "id") -> list[CaseEntry]:
    """All rows for the given group, one per minuscule index."""
    type_letter = type_letter.upper()
    rs = build_root_system(type_letter, rank)
    twist_permutation(rs, twist)
    if type_letter == "A" and twist == "id":
        fixture = load_type_a_fixture()
        rows = [e for e in fixture if e.rank == rank]
        if len(rows) != len(rs.minuscule_indices):
            rows = [derive_entry("A", rank, i) for i in sorted(rs.minuscule_indices)]
        return rows
    if (type_letter, twist) not in _TABLE:
        if not rs.minuscule_indices:
            return []
        raise RootSystemError(f"no table rows for {type_letter}{rank} with twist {twist}")
    if type_letter == "E" and rank == 8:
        return []
    builder, images = _TABLE[(type_letter, twist)]
    out = {}
    for i in sorted(rs.minuscule_indices):
        row = builder(rank, i)
        if row is not None:
            case, orbs, J, c = row
            out[i] = CaseEntry(type_letter, rank, twist, i, case, orbs, J, c)
    for i, (src, perm) in images(rank).items():
        if i in rs.minuscule_indices and i not in out:
            out[i] = image_entry(out[src], perm, i)
    return [out[i] for i in sorted(out)]


@dataclass
class EntryVerification:
    entry: CaseEntry
    checks: dict[str, bool]
    computed_orbits: list[tuple[int, ...]] = field(default_factory=list)
    computed_support: list[int] = field(default_factory=list)
    J_maximal: bool = False

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            **self.entry.to_dict(),
            "label": self.entry.label,
            "checks": dict(self.checks),
            "J_maximal": self.J_maximal,
            "computed_orbits": [list(o) for o in self.computed_orbits],
            "computed_support": self.computed_support,
            "passed": self.passed,
        }


def entry_element(e: CaseEntry, g: AffineWeylGroup | None = None) -> tuple[OmegaElement, AffineElement]:
    """(tau delta', tau delta' c) for a row."""
    g = g or e.group()
    k = 0 if e.twist == "id" else 1
    tau = g.tau(e.index, k)
    x = g.multiply(tau.element, g.from_word(e.c_word))
    return tau, x


def verify_entry(e: CaseEntry) -> EntryVerification:
    g = e.group()
    tau_plain = g.tau(e.index)
    tau, x = entry_element(e, g)
    checks = {"tau_length_zero": tau_plain.element.length() == 0 and tau.element.length() == 0}
    computed = g.omega_orbits(tau)
    checks["orbits_match"] = frozenset(frozenset(o) for o in computed) == e.orbits
    support = g.support(x, tau)
    checks["support_is_J"] = support == e.J
    checks["finite_part_coxeter"] = has_finite_coxeter_part(x)
    perm = g.node_permutation(tau)
    stable = {perm[j] for j in e.J} == set(e.J) and e.J != frozenset(g.nodes)
    checks["is_parabolic_coxeter"] = stable and x in parabolic_coxeter_elements(e.J, tau)
    return EntryVerification(
        e, checks, computed, sorted(support), is_maximal_proper(e.J, perm, g.nodes)
    )


def _search(g: AffineWeylGroup, tau: OmegaElement):
    """Candidates (J, x, c): J maximal proper and tau-stable, x = tau c a Coxeter element
    of W_J x| <tau> in W_J tau with c in W0, and x with finite Coxeter part."""
    perm = g.node_permutation(tau)
    orbs = orbits(perm, g.nodes)
    tinv = g.inverse(tau.element)
    for orb in sorted(orbs):
        J = frozenset(g.nodes) - set(orb)
        for x in sorted(parabolic_coxeter_elements(J, tau), key=AffineElement.sort_key):
            c = g.multiply(tinv, x)
            if c.chi.any() or c.delta_pow:
                continue
            if has_finite_coxeter_part(x):
                yield J, x, c


def derive_entry(type_letter: str, rank: int, index: int, twist: str = "id") -> CaseEntry:
    """Find a row by exhaustive search instead of transcription."""
    g = _group(type_letter.upper(), rank, twist)
    k = 0 if twist == "id" else 1
    tau = g.tau(index, k)
    orbs = frozenset(frozenset(o) for o in g.omega_orbits(tau))
    for J, x, c in _search(g, tau):
        word = tuple(g.finite.reduced_word(c.w))
        e = CaseEntry(type_letter.upper(), rank, twist, index, "derived by search", orbs, J, word)
        if verify_entry(e).passed:
            return e
    raise AssertionError(f"no witness found for {type_letter}{rank} tau_{index} twist {twist}")


# type A fixture

_FIXTURE = "type_a_entries.json"
TYPE_A_MAX_RANK = 7


def generate_type_a_fixture(max_rank: int = TYPE_A_MAX_RANK) -> dict:
    entries = [
        derive_entry("A", n, i).to_dict()
        for n in range(1, max_rank + 1)
        for i in range(1, n + 1)
    ]
    payload = json.dumps(entries, sort_keys=True)
    return {"entries": entries, "sha256": hashlib.sha256(payload.encode()).hexdigest()}


def fixture_checksum(entries: list[dict]) -> str:
    return hashlib.sha256(json.dumps(entries, sort_keys=True).encode()).hexdigest()


@lru_cache(maxsize=None)
def _load_fixture_raw() -> tuple:
    try:
        text = resources.files("fincox.data").joinpath(_FIXTURE).read_text()
    except FileNotFoundError:
        return ()
    data = json.loads(text)
    if fixture_checksum(data["entries"]) != data["sha256"]:
        raise ValueError("type A fixture checksum mismatch")
    return tuple(CaseEntry.from_dict(d) for d in data["entries"])


def load_type_a_fixture() -> list[CaseEntry]:
    return list(_load_fixture_raw())


# class representatives for the theorem driver


def _twist_name(g: AffineWeylGroup, k: int) -> str | None:
    """Name of the diagram automorphism delta^k, if it is one of the tabulated twists."""
    perm = tuple(g.finite.delta_node(i, k) for i in g.rs.nodes)
    if perm == tuple(g.rs.nodes):
        return "id"
    for name in ("flip", "triality"):
        try:
            if twist_permutation(g.rs, name) == perm:
                return name
        except RootSystemError:
            pass
    return None


def class_representative(g: AffineWeylGroup, tau: OmegaElement) -> tuple[AffineElement, str]:
    """A Coxeter element c_J of W_J x| <tau> lying in W_a tau with finite Coxeter part.

    Returns the element and where it came from (table row, Coxeter element, search).
    """
    k = tau.delta_pow
    if tau.index is None:
        c = g.finite.standard_coxeter_element(k)
        return g.from_finite(c), "J = S0, Coxeter element of W0 delta^k"
    name = _twist_name(g, k)
    if name is not None:
        try:
            rows = table_entries(g.rs.type_letter, g.rs.rank, name)
        except RootSystemError:
            rows = []
        for e in rows:
            if e.index == tau.index:
                x = g.multiply(tau.element, g.from_word(e.c_word))
                return x, f"table row {e.label} ({e.parity_case or 'single case'})"
    for J, x, _ in _search(g, tau):
        return x, f"search: J = {sorted(J)}"
    raise AssertionError(f"no class with finite Coxeter part found in W_a {tau}")


def coset_class_representatives(g: AffineWeylGroup, tau: OmegaElement) -> list[tuple[AffineElement, str]]:
    """One representative per W_a-class with finite Coxeter part inside W_a tau.

    These are the Omega-conjugates sigma c_J sigma^{-1} for sigma commuting with tau.
    """
    from .conjugacy import omega_centralizer, omega_translate_class

    base, origin = class_representative(g, tau)
    out = []
    seen = set()
    for sigma in omega_centralizer(g, tau):
        x = omega_translate_class(base, sigma)
        if x in seen:
            continue
        seen.add(x)
        tag = origin if sigma.index is None else f"{origin}, conjugated by {sigma}"
        out.append((x, tag))
    return out


def render_table(results: list[EntryVerification]) -> str:
    """Aligned plain-text table of verified rows."""
    head = ["row", "case", "J", "c", *ENTRY_CHECKS]
    rows = []
    for r in results:
        e = r.entry
        rows.append([
            e.label,
            e.parity_case or "-",
            "S~-{" + ",".join(str(j) for j in sorted(set(range(e.rank + 1)) - e.J)) + "}",
            " ".join(f"s{i}" for i in e.c_word) or "e",
            *("ok" if r.checks[c] else "FAIL" for c in ENTRY_CHECKS),
        ])
    widths = [max(len(str(x)) for x in col) for col in zip(head, *rows)]
    lines = ["  ".join(str(x).ljust(w) for x, w in zip(line, widths)).rstrip() for line in [head, *rows]]
    return "\n".join(lines)
