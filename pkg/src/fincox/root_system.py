"""Irreducible reduced crystallographic root systems in Bourbaki labeling.

Nodes are labelled ``1..rank``; the affine node is ``0`` and never appears here.
Roots are integer vectors in the simple-root basis, coweights integer vectors in
the fundamental-coweight basis, so the pairing of a coweight with a root is the
plain dot product.

``cartan[i][j]`` stores ``<alpha_{i+1}^vee, alpha_{j+1}>``.  Row ``i`` is therefore
the simple coroot ``alpha_{i+1}^vee`` written in fundamental coweights.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .lattice import determinant

__all__ = [
    "RootSystem",
    "RootSystemError",
    "build_root_system",
    "cartan_matrix",
    "pairing",
    "minuscule_coweights",
    "TWISTS",
]


class RootSystemError(ValueError):
    pass


_E_EDGES = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)]


def _check_type(type_letter: str, rank: int) -> None:
    ok = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }
    if type_letter not in ok:
        raise RootSystemError(f"unknown Cartan type {type_letter!r}; expected one of A-G")
    if not ok[type_letter]:
        raise RootSystemError(f"type {type_letter} does not exist in rank {rank}")
    if rank > 8:
        raise RootSystemError(f"rank {rank} exceeds the supported ceiling of 8")


def cartan_matrix(type_letter: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix with ``entry[i][j] = <alpha_{i+1}^vee, alpha_{j+1}>``."""
    type_letter = type_letter.upper()
    _check_type(type_letter, rank)
    n = rank
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, ij=-1, ji=-1):
        # 1-based nodes; ij = <alpha_i^vee, alpha_j>
        c[i - 1][j - 1] = ij
        c[j - 1][i - 1] = ji

    if type_letter in "ABC":
        for i in range(1, n):
            bond(i, i + 1)
        if type_letter == "B":
            bond(n - 1, n, -1, -2)  # alpha_n short
        elif type_letter == "C":
            bond(n - 1, n, -2, -1)  # alpha_n long
    elif type_letter == "D":
        for i in range(1, n - 1):
            bond(i, i + 1)
        bond(n - 2, n)
    elif type_letter == "E":
        for i, j in _E_EDGES:
            if j <= n:
                bond(i, j)
    elif type_letter == "F":
        bond(1, 2)
        bond(2, 3, -1, -2)  # alpha_1, alpha_2 long
        bond(3, 4)
    elif type_letter == "G":
        bond(1, 2, -3, -1)  # alpha_1 short
    return tuple(tuple(row) for row in c)


def _diagram_automorphisms(cartan) -> list[tuple[int, ...]]:
    """All node permutations (as 1-based image tuples) preserving the Cartan matrix."""
    n = len(cartan)
    found = []

    def extend(images: list[int], used: set[int]):
        k = len(images)
        if k == n:
            found.append(tuple(i + 1 for i in images))
            return
        for cand in range(n):
            if cand in used:
                continue
            if cartan[cand][cand] != cartan[k][k]:
                continue
            if all(
                cartan[cand][images[j]] == cartan[k][j] and cartan[images[j]][cand] == cartan[j][k]
                for j in range(k)
            ):
                images.append(cand)
                used.add(cand)
                extend(images, used)
                images.pop()
                used.discard(cand)

    extend([], set())
    return sorted(found)


@dataclass(frozen=True)
class RootSystem:
    type_letter: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    positive_coroots: tuple[tuple[int, ...], ...]
    highest_root: tuple[int, ...]
    minuscule_indices: frozenset[int]
    diagram_autos: tuple[tuple[int, ...], ...]
    _root_index: dict = field(default=None, repr=False, compare=False)

    @property
    def name(self) -> str:
        return f"{self.type_letter}{self.rank}"

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    @property
    def highest_coroot(self) -> tuple[int, ...]:
        return self.coroot(self.highest_root)

    def coroot(self, alpha) -> tuple[int, ...]:
        """Coroot of a root, in fundamental-coweight coordinates."""
        alpha = tuple(int(a) for a in alpha)
        if alpha in self._root_index:
            return self.positive_coroots[self._root_index[alpha]]
        neg = tuple(-a for a in alpha)
        if neg in self._root_index:
            return tuple(-a for a in self.positive_coroots[self._root_index[neg]])
        raise RootSystemError(f"{alpha} is not a root of {self.name}")

    def simple_coroot(self, i: int) -> tuple[int, ...]:
        return self.cartan[i - 1]

    def fundamental_coweight(self, i: int) -> tuple[int, ...]:
        return tuple(1 if j == i else 0 for j in self.nodes)

    @property
    def fundamental_coweights(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.fundamental_coweight(i) for i in self.nodes)

    def is_root(self, alpha) -> bool:
        alpha = tuple(int(a) for a in alpha)
        return alpha in self._root_index or tuple(-a for a in alpha) in self._root_index

    @cached_property
    def cartan_determinant(self) -> int:
        """Index of the coroot lattice in the coweight lattice."""
        return determinant(self.cartan)

    @cached_property
    def positive_root_array(self) -> np.ndarray:
        arr = np.array(self.positive_roots, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def cartan_array(self) -> np.ndarray:
        arr = np.array(self.cartan, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def to_dict(self) -> dict:
        return {
            "type": self.type_letter,
            "rank": self.rank,
            "nodes": list(self.nodes),
            "cartan": [list(r) for r in self.cartan],
            "positive_roots": [list(r) for r in self.positive_roots],
            "highest_root": list(self.highest_root),
            "highest_coroot": list(self.highest_coroot),
            "minuscule_indices": sorted(self.minuscule_indices),
            "diagram_autos": [list(p) for p in self.diagram_autos],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _reflect_root(cartan, i: int, alpha: tuple[int, ...]) -> tuple[int, ...]:
    # s_i(alpha) = alpha - <alpha_i^vee, alpha> alpha_i
    k = sum(c * a for c, a in zip(cartan[i], alpha))
    out = list(alpha)
    out[i] -= k
    return tuple(out)


def _reflect_coweight(cartan, i: int, chi: tuple[int, ...]) -> tuple[int, ...]:
    # s_i(chi) = chi - <chi, alpha_i> alpha_i^vee
    k = chi[i]
    return tuple(x - k * c for x, c in zip(chi, cartan[i]))


def _generate_roots(cartan):
    """Weyl orbit of the simple roots, carrying coroots along."""
    n = len(cartan)
    coroot = {}
    queue = deque()
    for i in range(n):
        a = tuple(1 if j == i else 0 for j in range(n))
        coroot[a] = tuple(cartan[i])
        queue.append(a)
    while queue:
        a = queue.popleft()
        for i in range(n):
            b = _reflect_root(cartan, i, a)
            if b not in coroot:
                coroot[b] = _reflect_coweight(cartan, i, coroot[a])
                queue.append(b)
    return coroot


def build_root_system(type_letter: str, rank: int) -> RootSystem:
    return _build(type_letter.upper(), int(rank))


@lru_cache(maxsize=None)
def _build(type_letter: str, rank: int) -> RootSystem:
    cartan = cartan_matrix(type_letter, rank)
    coroot = _generate_roots(cartan)
    positive = sorted(
        (a for a in coroot if all(x >= 0 for x in a)),
        key=lambda a: (sum(a), a),
    )
    if len(positive) * 2 != len(coroot):
        raise RootSystemError("root generation produced an unbalanced root set")
    theta = positive[-1]
    if len(positive) > 1 and sum(positive[-2]) == sum(theta):
        raise RootSystemError("highest root is not unique")
    minuscule = frozenset(
        i + 1 for i in range(rank) if max(a[i] for a in positive) == 1
    )
    return RootSystem(
        type_letter=type_letter,
        rank=rank,
        cartan=cartan,
        positive_roots=tuple(positive),
        positive_coroots=tuple(coroot[a] for a in positive),
        highest_root=theta,
        minuscule_indices=minuscule,
        diagram_autos=tuple(_diagram_automorphisms(cartan)),
        _root_index={a: k for k, a in enumerate(positive)},
    )


def pairing(chi, alpha) -> int:
    """<chi, alpha> for a coweight in fundamental coweights and a root in simple roots."""
    if len(chi) != len(alpha):
        raise ValueError(f"dimension mismatch: coweight has {len(chi)} entries, root {len(alpha)}")
    return sum(int(x) * int(a) for x, a in zip(chi, alpha))


def minuscule_coweights(rs: RootSystem) -> frozenset[int]:
    return rs.minuscule_indices


def _flip(type_letter: str, rank: int) -> tuple[int, ...] | None:
    n = rank
    if type_letter == "A" and n >= 2:
        return tuple(n + 1 - i for i in range(1, n + 1))
    if type_letter == "D":
        return tuple(range(1, n - 1)) + (n, n - 1)
    if type_letter == "E" and n == 6:
        return (6, 2, 5, 4, 3, 1)
    return None


def _triality(type_letter: str, rank: int) -> tuple[int, ...] | None:
    # 1 -> 3 -> 4 -> 1
    if type_letter == "D" and rank == 4:
        return (3, 2, 4, 1)
    return None


TWISTS = {
    "id": lambda t, n: tuple(range(1, n + 1)),
    "flip": _flip,
    "triality": _triality,
}


def twist_permutation(rs: RootSystem, twist: str) -> tuple[int, ...]:
    """Named diagram automorphism as a 1-based image tuple."""
    if twist not in TWISTS:
        raise RootSystemError(f"unknown twist {twist!r}; expected one of {sorted(TWISTS)}")
    perm = TWISTS[twist](rs.type_letter, rs.rank)
    if perm is None:
        raise RootSystemError(f"{rs.name} has no {twist} diagram automorphism")
    assert perm in rs.diagram_autos, (rs.name, twist, perm)
    return perm
