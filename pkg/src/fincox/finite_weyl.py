"""The finite group W0' = W0 x| <delta>, elements stored as integer matrices.

An element ``w delta^k`` is kept as the matrix of its action on the coweight
lattice (fundamental-coweight basis) together with ``k``.  Because the pairing
between coweights and roots is the dot product, the action of the *inverse* of an
element on roots is just the transpose of its matrix; lengths are inversion
counts read off from that.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .lattice import integer_inverse
from .root_system import RootSystem, twist_permutation

__all__ = [
    "FiniteWeylGroup",
    "FiniteWeylElement",
    "ConjugacyBudgetExceeded",
    "orbits",
    "parse_word",
]

DEFAULT_CLASS_BUDGET = 2_000_000


class ConjugacyBudgetExceeded(RuntimeError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


def orbits(perm, nodes: Iterable[int]) -> list[tuple[int, ...]]:
    """Orbits of a permutation (callable or dict) on ``nodes``, each sorted, listed by minimum."""
    f = perm if callable(perm) else perm.__getitem__
    todo = sorted(set(nodes))
    seen: set[int] = set()
    out = []
    for x in todo:
        if x in seen:
            continue
        orb = [x]
        y = f(x)
        while y != x:
            orb.append(y)
            y = f(y)
        seen.update(orb)
        out.append(tuple(sorted(orb)))
    return out


_TOKEN = re.compile(r"s(\d+)$")


def parse_word(text: str) -> tuple[list[int], int]:
    """Parse ``"s1 s2 s1 d^1"`` into ``([1, 2, 1], 1)``.  ``"e"`` is the identity."""
    word, k = [], 0
    for tok in text.replace(",", " ").split():
        if tok in ("e", "1"):
            continue
        m = _TOKEN.match(tok)
        if m:
            word.append(int(m.group(1)))
            continue
        if tok.startswith("d^"):
            k += int(tok[2:])
            continue
        if tok == "d":
            k += 1
            continue
        raise ValueError(f"cannot parse token {tok!r} in word {text!r}")
    return word, k


def format_word(word: Sequence[int], k: int = 0) -> str:
    parts = [f"s{i}" for i in word]
    if k:
        parts.append(f"d^{k}")
    return " ".join(parts) if parts else "e"


class FiniteWeylElement:
    """``w delta^k`` in W0'; ``matrix`` is the action of the whole product on coweights."""

    __slots__ = ("group", "matrix", "delta_pow", "_key", "__weakref__")

    def __init__(self, group: "FiniteWeylGroup", matrix: np.ndarray, delta_pow: int):
        self.group = group
        self.matrix = matrix
        self.delta_pow = delta_pow % group.delta_order
        self._key = None

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.matrix.tobytes() + bytes([self.delta_pow])
        return self._key

    def __eq__(self, other):
        if not isinstance(other, FiniteWeylElement):
            return NotImplemented
        return self.key == other.key and (self.group is other.group or self.group.name == other.group.name)

    def __hash__(self):
        return hash(self.key)

    def __mul__(self, other: "FiniteWeylElement") -> "FiniteWeylElement":
        return self.group.multiply(self, other)

    def __repr__(self):
        return f"<{self.group.name}: {self}>"

    def __str__(self):
        return format_word(self.reduced_word(), self.delta_pow)

    def length(self) -> int:
        return self.group.length(self)

    def reduced_word(self) -> list[int]:
        return self.group.reduced_word(self)

    def inverse(self) -> "FiniteWeylElement":
        return self.group.inverse(self)

    def sort_key(self):
        return (self.length(), tuple(self.matrix.ravel().tolist()), self.delta_pow)

    def to_dict(self) -> dict:
        return {
            "word": str(self),
            "matrix": self.matrix.tolist(),
            "delta_pow": self.delta_pow,
        }


class _PartialMap:
    """A linear map known on a growing set of coweights, kept in echelon form.

    ``rows`` holds (pivot, vector, coefficients) with ``vector`` equal to the
    combination ``coefficients`` of ``sources``.
    """

    __slots__ = ("rows", "sources", "targets")

    def __init__(self):
        self.rows, self.sources, self.targets = [], [], []

    def copy(self) -> "_PartialMap":
        other = _PartialMap()
        other.rows, other.sources, other.targets = list(self.rows), list(self.sources), list(self.targets)
        return other

    def _reduce(self, u):
        vec = [Fraction(x) for x in u]
        comb = [Fraction(0)] * len(self.sources)
        for piv, rvec, rco in self.rows:
            f = vec[piv]
            if f:
                vec = [x - f * y for x, y in zip(vec, rvec)]
                for j, c in enumerate(rco):
                    comb[j] += f * c
        return vec, comb

    def contains(self, u) -> bool:
        return not any(self._reduce(u)[0])

    def add(self, u, v, form) -> bool:
        """Record u -> v; False if that contradicts linearity or the invariant form."""
        vec, comb = self._reduce(u)
        if not any(vec):
            n = len(v)
            image = [sum((c * t[k] for c, t in zip(comb, self.targets)), Fraction(0)) for k in range(n)]
            return image == list(v)
        if form(v, v) != form(u, u):
            return False
        if any(form(v, t) != form(u, s) for s, t in zip(self.sources, self.targets)):
            return False
        piv = next(k for k, x in enumerate(vec) if x)
        p = vec[piv]
        coeffs = [-c / p for c in comb] + [1 / p]
        self.rows.append((piv, [x / p for x in vec], coeffs))
        self.rows = [(pv, rv, rc + [Fraction(0)] * (len(coeffs) - len(rc))) for pv, rv, rc in self.rows]
        self.sources.append(tuple(u))
        self.targets.append(tuple(v))
        return True

    def matrix(self) -> np.ndarray | None:
        """The map as an integer matrix, once the sources span; None if not integral."""
        n = len(self.sources)
        S = [[Fraction(self.sources[j][i]) for j in range(n)] for i in range(n)]
        T = [[self.targets[j][i] for j in range(n)] for i in range(n)]
        # G = T S^{-1}; solve S^T G^T = T^T column by column
        inv = _fraction_inverse(S)
        G = [[sum(T[i][k] * inv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        if any(x.denominator != 1 for row in G for x in row):
            return None
        return np.array([[int(x) for x in row] for row in G], dtype=np.int64)


def _fraction_inverse(m):
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class FiniteWeylGroup:
    """W0 x| <delta> for a root system and a diagram automorphism ``delta``.

    ``delta`` is a 1-based image tuple (``delta[i-1]`` is the image of node ``i``)
    or a twist name understood by :func:`twist_permutation`.
    """

    def __init__(self, rs: RootSystem, delta: Sequence[int] | str | None = None):
        self.rs = rs
        if delta is None:
            delta = "id"
        if isinstance(delta, str):
            delta = twist_permutation(rs, delta)
        delta = tuple(int(x) for x in delta)
        if delta not in rs.diagram_autos:
            raise ValueError(f"{delta} is not a diagram automorphism of {rs.name}")
        self.delta = delta
        n = rs.rank
        order = 1
        p = delta
        while p != tuple(range(1, n + 1)):
            p = tuple(delta[x - 1] for x in p)
            order += 1
        self.delta_order = order
        self.rank = n
        self._pos = rs.positive_root_array
        eye = np.eye(n, dtype=np.int64)
        cartan = rs.cartan_array
        self._gen = {}
        for i in rs.nodes:
            m = eye.copy()
            m[:, i - 1] -= cartan[i - 1]
            self._gen[i] = _frozen(m)
        d = np.zeros((n, n), dtype=np.int64)
        for i in rs.nodes:
            d[delta[i - 1] - 1, i - 1] = 1
        self._delta_mats = [_frozen(np.linalg.matrix_power(d, k)) for k in range(order)]
        self._id = FiniteWeylElement(self, _frozen(eye), 0)

    @property
    def name(self) -> str:
        return f"{self.delta_order}{self.rs.name}" if self.delta_order > 1 else self.rs.name

    def delta_node(self, i: int, k: int = 1) -> int:
        for _ in range(k % self.delta_order):
            i = self.delta[i - 1]
        return i

    def __repr__(self):
        return f"FiniteWeylGroup({self.rs.name}, delta={self.delta})"

    # construction

    def identity(self) -> FiniteWeylElement:
        return self._id

    def element(self, matrix, delta_pow: int = 0) -> FiniteWeylElement:
        return FiniteWeylElement(self, _frozen(np.asarray(matrix)), delta_pow)

    def simple_reflection(self, i: int) -> FiniteWeylElement:
        return FiniteWeylElement(self, self._gen[i], 0)

    def delta_element(self, k: int = 1) -> FiniteWeylElement:
        k %= self.delta_order
        return FiniteWeylElement(self, self._delta_mats[k], k)

    def from_word(self, word: Sequence[int], delta_pow: int = 0) -> FiniteWeylElement:
        m = np.eye(self.rank, dtype=np.int64)
        for i in word:
            if i not in self._gen:
                raise ValueError(f"s{i} is not a simple reflection of {self.rs.name}")
            m = m @ self._gen[i]
        m = m @ self._delta_mats[delta_pow % self.delta_order]
        return FiniteWeylElement(self, _frozen(m), delta_pow)

    def parse(self, text: str) -> FiniteWeylElement:
        word, k = parse_word(text)
        return self.from_word(word, k)

    def matrix_of(self, word: Sequence[int]) -> np.ndarray:
        return self.from_word(word).matrix

    # arithmetic

    def _check(self, *elts):
        for x in elts:
            if x.group is not self:
                raise ValueError("elements belong to different groups")

    def multiply(self, a: FiniteWeylElement, b: FiniteWeylElement) -> FiniteWeylElement:
        self._check(a, b)
        return FiniteWeylElement(self, _frozen(a.matrix @ b.matrix), a.delta_pow + b.delta_pow)

    def inverse(self, a: FiniteWeylElement) -> FiniteWeylElement:
        return FiniteWeylElement(self, self.matrix_inverse(a.matrix), -a.delta_pow)

    @cached_property
    def _form_inverse(self) -> tuple[np.ndarray, int]:
        inv = _fraction_inverse([[Fraction(int(x)) for x in row] for row in self._form])
        den = 1
        for row in inv:
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
        return np.array([[int(x * den) for x in row] for row in inv], dtype=np.int64), den

    def matrix_inverse(self, m: np.ndarray) -> np.ndarray:
        """Inverse of an element's matrix: every element preserves the invariant form F,
        so m^{-1} = F^{-1} m^T F."""
        num, den = self._form_inverse
        scaled = num @ m.T @ self._form
        inv = scaled // den
        if (inv * den != scaled).any() or not (m @ inv == np.eye(self.rank, dtype=np.int64)).all():
            inv = np.array(integer_inverse(m.tolist()), dtype=np.int64)
        return _frozen(inv)

    def conjugate_by_simple(self, i: int, a: FiniteWeylElement) -> FiniteWeylElement:
        s = self._gen[i]
        return FiniteWeylElement(self, _frozen(s @ a.matrix @ s), a.delta_pow)

    def power(self, a: FiniteWeylElement, n: int) -> FiniteWeylElement:
        if n < 0:
            return self.power(self.inverse(a), -n)
        m = np.linalg.matrix_power(a.matrix, n)
        return FiniteWeylElement(self, _frozen(m), a.delta_pow * n)

    def order(self, a: FiniteWeylElement) -> int:
        m = np.eye(self.rank, dtype=np.int64)
        for n in itertools.count(1):
            m = m @ a.matrix
            if (a.delta_pow * n) % self.delta_order == 0 and np.array_equal(m, self._id.matrix):
                return n
        raise AssertionError  # pragma: no cover

    # length and words

    def root_images_of_inverse(self, a: FiniteWeylElement) -> np.ndarray:
        """Row ``r`` is ``a^{-1}(alpha_r)`` for the r-th positive root."""
        return self._pos @ a.matrix

    def length(self, a: FiniteWeylElement) -> int:
        return int(np.count_nonzero((self._pos @ a.matrix).sum(axis=1) < 0))

    def is_left_descent(self, a: FiniteWeylElement, i: int) -> bool:
        # a^{-1}(alpha_i) < 0; row i-1 of the matrix is a^{-1}(alpha_i)
        return a.matrix[i - 1].sum() < 0

    def reduced_word(self, a: FiniteWeylElement) -> list[int]:
        """Reduced word of the W0 part, by repeatedly stripping a left descent."""
        word = []
        m = a.matrix
        while True:
            for i in self.rs.nodes:
                if m[i - 1].sum() < 0:
                    word.append(i)
                    m = self._gen[i] @ m
                    break
            else:
                return word

    def w0_part(self, a: FiniteWeylElement) -> FiniteWeylElement:
        """The W0 factor ``w`` of ``w delta^k``."""
        if a.delta_pow == 0:
            return a
        return FiniteWeylElement(self, _frozen(a.matrix @ self._delta_mats[a.delta_pow].T), 0)

    def longest_element(self, J: Iterable[int] | None = None) -> FiniteWeylElement:
        """w_0^J, grown by right multiplication with length-increasing s_j, j in J."""
        J = sorted(self.rs.nodes if J is None else set(J))
        w = self._id
        grew = True
        while grew:
            grew = False
            for j in J:
                cand = FiniteWeylElement(self, _frozen(w.matrix @ self._gen[j]), 0)
                if self.length(cand) > self.length(w):
                    w = cand
                    grew = True
        return w

    # Coxeter elements and conjugacy

    def coxeter_elements(self, J: Iterable[int] | None = None, delta_pow: int = 0) -> set[FiniteWeylElement]:
        """Products of one reflection per delta^k-orbit on J, in every order, times delta^k."""
        J = set(self.rs.nodes if J is None else J)
        k = delta_pow % self.delta_order
        if {self.delta_node(j, k) for j in J} != J:
            raise ValueError(f"J={sorted(J)} is not stable under delta^{k}")
        orbs = orbits(lambda j: self.delta_node(j, k), J)
        out = set()
        for reps in itertools.product(*orbs):
            for perm in itertools.permutations(reps):
                out.add(self.from_word(perm, k))
        return out

    def is_coxeter_element(self, a: FiniteWeylElement) -> bool:
        """Exactly one reflection per delta^k-orbit: length equals the orbit count and
        the delta-closure of the support is everything."""
        k = a.delta_pow
        orbs = orbits(lambda j: self.delta_node(j, k), self.rs.nodes)
        word = self.reduced_word(self.w0_part(a))
        if len(word) != len(orbs):
            return False
        hit = {next(o for o in orbs if j in o) for j in word}
        return len(hit) == len(orbs)

    def standard_coxeter_element(self, delta_pow: int = 0) -> FiniteWeylElement:
        k = delta_pow % self.delta_order
        reps = [o[0] for o in orbits(lambda j: self.delta_node(j, k), self.rs.nodes)]
        return self.from_word(reps, k)

    def terminal_stratum(self, a: FiniteWeylElement) -> frozenset[FiniteWeylElement]:
        """Length-minimal cyclic-shift class reached from ``a`` by descent.

        Explores length-preserving simple conjugations and jumps as soon as a
        strictly shorter conjugate appears.  When nothing shorter is reachable the
        stratum consists of minimal-length elements of the conjugacy class.
        """
        current = a
        while True:
            ell = self.length(current)
            seen = {current}
            queue = deque([current])
            lower = None
            while queue and lower is None:
                x = queue.popleft()
                for i in self.rs.nodes:
                    y = self.conjugate_by_simple(i, x)
                    ly = self.length(y)
                    if ly < ell:
                        lower = y
                        break
                    if ly == ell and y not in seen:
                        seen.add(y)
                        queue.append(y)
            if lower is None:
                return frozenset(seen)
            current = lower

    def conjugacy_class(self, a: FiniteWeylElement, budget: int = DEFAULT_CLASS_BUDGET) -> set[FiniteWeylElement]:
        """Full W0-conjugacy class by BFS over simple conjugations."""
        seen = {a}
        queue = deque([a])
        while queue:
            x = queue.popleft()
            for i in self.rs.nodes:
                y = self.conjugate_by_simple(i, x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > budget:
                        raise ConjugacyBudgetExceeded(f"class of {a} exceeds {budget} elements")
                    queue.append(y)
        return seen

    def power_traces(self, a: FiniteWeylElement) -> tuple[int, ...]:
        """Traces of a, a^2, ..., a^rank; equal iff characteristic polynomials agree."""
        out = []
        m = np.eye(self.rank, dtype=np.int64)
        for _ in range(self.rank):
            m = m @ a.matrix
            out.append(int(np.trace(m)))
        return tuple(out)

    def is_conjugate(self, a: FiniteWeylElement, b: FiniteWeylElement, budget: int = DEFAULT_CLASS_BUDGET) -> bool:
        """Whether ``a`` and ``b`` are conjugate under W0."""
        self._check(a, b)
        if a.delta_pow != b.delta_pow:
            return False
        if a == b:
            return True
        ta, tb = self.terminal_stratum(a), self.terminal_stratum(b)
        if ta & tb:
            return True
        la = self.length(next(iter(ta)))
        lb = self.length(next(iter(tb)))
        if la != lb:
            return False
        if self.power_traces(a) != self.power_traces(b):
            return False
        return self.find_conjugator(next(iter(ta)), next(iter(tb)), budget) is not None

    # conjugator search

    @cached_property
    def _form(self) -> np.ndarray:
        # Q(chi) = sum over positive roots of <chi, alpha>^2, invariant under Aut
        return self._pos.T @ self._pos

    @cached_property
    def _coroot_set(self) -> tuple[tuple[int, ...], ...]:
        pos = [tuple(int(x) for x in c) for c in self.rs.positive_coroots]
        return tuple(pos + [tuple(-x for x in c) for c in pos])

    def _in_w0(self, G: np.ndarray) -> bool:
        """Whether an automorphism of the coroot system lies in W0: reduce G rho to
        the dominant chamber and see whether what is left is the identity."""
        v = G @ np.ones(self.rank, dtype=np.int64)
        H = G
        while True:
            neg = np.flatnonzero(v < 0)
            if not len(neg):
                break
            i = int(neg[0]) + 1
            v = self._gen[i] @ v
            H = self._gen[i] @ H
        return bool((H == np.eye(self.rank, dtype=np.int64)).all())

    def find_conjugator(
        self, a: FiniteWeylElement, b: FiniteWeylElement, budget: int = DEFAULT_CLASS_BUDGET
    ) -> FiniteWeylElement | None:
        """Some g in W0 with ``g a g^{-1} = b``, or None.

        Backtracks over images of simple coroots under g.  Once the image of a
        coroot u is fixed, ``g a^m u = b^m g u`` fixes a whole orbit; choices must
        stay linear and preserve the invariant form.  A complete choice is an
        automorphism of the coroot system, accepted when it lies in W0.
        """
        self._check(a, b)
        if a.delta_pow != b.delta_pow or self.order(a) != self.order(b):
            return None
        F = self._form
        A, B = a.matrix, b.matrix
        order = self.order(a)
        coroots = self._coroot_set
        simple = [tuple(int(x) for x in row) for row in self.rs.cartan]
        coroot_keys = set(coroots)

        def form(u, v):
            return int(np.array(u, dtype=object) @ F.astype(object) @ np.array(v, dtype=object))

        norms = {c: form(c, c) for c in coroots}
        nodes = 0

        def orbit(u, beta):
            u, beta = np.array(u, dtype=np.int64), np.array(beta, dtype=np.int64)
            for _ in range(order):
                yield tuple(int(x) for x in u), tuple(int(x) for x in beta)
                u, beta = A @ u, B @ beta

        def finish(pm):
            G = pm.matrix()
            if G is None:
                return None
            if any(tuple(int(x) for x in G @ np.array(c)) not in coroot_keys for c in simple):
                return None
            if not (G @ A == B @ G).all() or not self._in_w0(G):
                return None
            return FiniteWeylElement(self, _frozen(G), 0)

        def extend(pm):
            nonlocal nodes
            nxt = next((c for c in simple if not pm.contains(c)), None)
            if nxt is None:
                return finish(pm)
            want = [form(nxt, s) for s in pm.sources]
            for beta in coroots:
                if norms[beta] != norms[nxt]:
                    continue
                if any(form(beta, t) != w for t, w in zip(pm.targets, want)):
                    continue
                nodes += 1
                if nodes > budget:
                    raise ConjugacyBudgetExceeded(f"conjugator search for {a} and {b} exceeds {budget} nodes")
                child = pm.copy()
                if all(child.add(u, v, form) for u, v in orbit(nxt, beta)):
                    found = extend(child)
                    if found is not None:
                        return found
            return None

        return extend(_PartialMap())

    def is_coxeter_class(self, a: FiniteWeylElement) -> bool:
        return self.is_conjugate(a, self.standard_coxeter_element(a.delta_pow))

    def elements(self, limit: int = 100_000) -> list[FiniteWeylElement]:
        """Every element of W0 (delta power 0), by BFS; test helper for small ranks."""
        seen = {self._id}
        queue = deque([self._id])
        while queue:
            x = queue.popleft()
            for i in self.rs.nodes:
                y = FiniteWeylElement(self, _frozen(x.matrix @ self._gen[i]), 0)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > limit:
                        raise ConjugacyBudgetExceeded(f"|W| exceeds {limit}")
                    queue.append(y)
        return sorted(seen, key=FiniteWeylElement.sort_key)
