"""Extended affine Weyl groups P^vee x| (W0 x| <delta>) with exact arithmetic.

An element ``t^chi w delta^k`` is stored as ``(chi, M, k)`` where ``M`` is the
matrix of ``w delta^k`` on coweights.  The product is
``(chi, M, k)(chi', M', k') = (chi + M chi', M M', k + k')``.  The affine simple
reflection ``s_0`` is ``t^{theta^vee} s_theta`` and is expanded on the spot, so no
element ever carries a word.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .finite_weyl import FiniteWeylElement, FiniteWeylGroup, format_word, orbits
from .lattice import solve_rational
from .root_system import RootSystem, build_root_system

__all__ = [
    "AffineWeylGroup",
    "AffineElement",
    "OmegaElement",
    "FiniteOrderWitness",
    "cayley_ball",
    "reduced_word_oracle",
]


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class AffineElement:
    """``t^chi w delta^k``; equality is componentwise on ``(chi, matrix, k)``."""

    __slots__ = ("group", "chi", "matrix", "delta_pow", "_key", "_length")

    def __init__(self, group: "AffineWeylGroup", chi: np.ndarray, matrix: np.ndarray, delta_pow: int):
        self.group = group
        self.chi = chi
        self.matrix = matrix
        self.delta_pow = delta_pow % group.delta_order
        self._key = None
        self._length = None

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.chi.tobytes() + self.matrix.tobytes() + bytes([self.delta_pow])
        return self._key

    def __eq__(self, other):
        if not isinstance(other, AffineElement):
            return NotImplemented
        return self.key == other.key and (self.group is other.group or self.group.name == other.group.name)

    def __hash__(self):
        return hash(self.key)

    def __mul__(self, other):
        return self.group.multiply(self, other)

    def __str__(self):
        return self.group.format(self)

    def __repr__(self):
        return f"<{self.group.name}: {self}>"

    def length(self) -> int:
        if self._length is None:
            self._length = self.group.length(self)
        return self._length

    def inverse(self) -> "AffineElement":
        return self.group.inverse(self)

    @property
    def w(self) -> FiniteWeylElement:
        """The W0 factor of the finite part (delta power stripped)."""
        return self.group.finite.w0_part(self.group.eta(self))

    def sort_key(self):
        return (self.length(), tuple(self.chi.tolist()), tuple(self.matrix.ravel().tolist()), self.delta_pow)

    def to_dict(self) -> dict:
        return {
            "text": str(self),
            "chi": self.chi.tolist(),
            "w": self.group.finite.reduced_word(self.w),
            "delta_pow": self.delta_pow,
            "length": self.length(),
        }


@dataclass(frozen=True)
class OmegaElement:
    """A length-zero element ``tau_i delta^k`` of Omega'."""

    element: AffineElement
    index: int | None
    delta_pow: int = 0

    def __str__(self):
        base = "e" if self.index is None else f"tau{self.index}"
        return base if not self.delta_pow else f"{base} d^{self.delta_pow}"

    @property
    def label(self) -> str:
        return str(self)

    def to_dict(self) -> dict:
        return {"label": self.label, "index": self.index, "delta_pow": self.delta_pow, "element": str(self.element)}


@dataclass(frozen=True)
class FiniteOrderWitness:
    order_of_finite_part: int
    translation: tuple[int, ...]

    @property
    def finite(self) -> bool:
        return not any(self.translation)

    def __bool__(self):
        return self.finite


_ELEMENT_RE = re.compile(r"^\s*(?:t\[(?P<chi>[^\]]*)\])?(?P<rest>.*)$")


class AffineWeylGroup:
    """P^vee x| W0', the extended affine Weyl group twisted by ``delta``."""

    def __init__(self, rs: RootSystem | str, delta: Sequence[int] | str | None = None, rank: int | None = None):
        if isinstance(rs, str):
            rs = build_root_system(rs, rank)
        self.rs = rs
        self.finite = FiniteWeylGroup(rs, delta)
        self.delta = self.finite.delta
        self.delta_order = self.finite.delta_order
        self.rank = rs.rank
        self.nodes = (0,) + rs.nodes
        self._pos = rs.positive_root_array
        self._zero = _frozen(np.zeros(self.rank, dtype=np.int64))
        theta = np.array(rs.highest_root, dtype=np.int64)
        theta_v = np.array(rs.highest_coroot, dtype=np.int64)
        s_theta = np.eye(self.rank, dtype=np.int64) - np.outer(theta_v, theta)
        self._gens = {0: AffineElement(self, _frozen(theta_v), _frozen(s_theta), 0)}
        for i in rs.nodes:
            self._gens[i] = AffineElement(self, self._zero, self.finite.simple_reflection(i).matrix, 0)
        self._identity = AffineElement(self, self._zero, self.finite.identity().matrix, 0)
        self._tau_cache: dict[tuple, OmegaElement] = {}

    @property
    def name(self) -> str:
        return f"{self.delta_order}{self.rs.name}" if self.delta_order > 1 else self.rs.name

    def __repr__(self):
        return f"AffineWeylGroup({self.rs.name}, delta={self.delta})"

    # construction

    def identity(self) -> AffineElement:
        return self._identity

    def simple_reflection(self, i: int) -> AffineElement:
        return self._gens[i]

    def translation(self, chi) -> AffineElement:
        chi = np.asarray(chi, dtype=np.int64)
        if chi.shape != (self.rank,):
            raise ValueError(f"translation needs {self.rank} coordinates, got {chi.shape}")
        return AffineElement(self, _frozen(chi), self._identity.matrix, 0)

    def delta_element(self, k: int = 1) -> AffineElement:
        d = self.finite.delta_element(k)
        return AffineElement(self, self._zero, d.matrix, d.delta_pow)

    def from_finite(self, w: FiniteWeylElement) -> AffineElement:
        if w.group is not self.finite:
            raise ValueError("finite element from a different group")
        return AffineElement(self, self._zero, w.matrix, w.delta_pow)

    def make(self, chi, w: FiniteWeylElement) -> AffineElement:
        """``t^chi`` times the finite element ``w`` (which may carry a delta power)."""
        return self.multiply(self.translation(chi), self.from_finite(w))

    def from_word(self, word: Iterable[int], delta_pow: int = 0) -> AffineElement:
        """Product of s_i over ``word`` (letters in S~, 0 allowed) times delta^k."""
        x = self._identity
        for i in word:
            if i not in self._gens:
                raise ValueError(f"s{i} is not a simple reflection of affine {self.rs.name}")
            x = self.multiply(x, self._gens[i])
        return self.multiply(x, self.delta_element(delta_pow)) if delta_pow % self.delta_order else x

    # arithmetic

    def multiply(self, a: AffineElement, b: AffineElement) -> AffineElement:
        if a.group is not self or b.group is not self:
            raise ValueError("elements belong to different groups")
        return AffineElement(
            self,
            _frozen(a.chi + a.matrix @ b.chi),
            _frozen(a.matrix @ b.matrix),
            a.delta_pow + b.delta_pow,
        )

    def product(self, *elts: AffineElement) -> AffineElement:
        x = self._identity
        for y in elts:
            x = self.multiply(x, y)
        return x

    def inverse(self, a: AffineElement) -> AffineElement:
        inv = self.finite.matrix_inverse(a.matrix)
        return AffineElement(self, _frozen(-(inv @ a.chi)), inv, -a.delta_pow)

    def conjugate(self, g: AffineElement, x: AffineElement) -> AffineElement:
        """g x g^{-1}."""
        return self.multiply(self.multiply(g, x), self.inverse(g))

    def simple_conjugate(self, i: int, x: AffineElement) -> AffineElement:
        """s_i x s_i."""
        s = self._gens[i]
        return self.multiply(self.multiply(s, x), s)

    def power(self, x: AffineElement, n: int) -> AffineElement:
        if n < 0:
            return self.power(self.inverse(x), -n)
        result, base = self._identity, x
        while n:
            if n & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            n >>= 1
        return result

    # length

    def length(self, x: AffineElement) -> int:
        """Iwahori-Matsumoto length; delta contributes nothing."""
        pairings = self._pos @ x.chi
        inverted = (self._pos @ x.matrix).sum(axis=1) < 0
        return int(np.abs(pairings - inverted).sum())

    def is_left_descent(self, x: AffineElement, i: int) -> bool:
        return self.multiply(self._gens[i], x).length() < x.length()

    def reduced_word(self, x: AffineElement) -> tuple[list[int], AffineElement]:
        """Greedy left-descent word over S~ and the length-zero remainder.

        ``x == s_{w1} ... s_{wm} * remainder`` with ``m == length(x)``.
        """
        word = []
        y = x
        ell = y.length()
        while ell:
            for i in self.nodes:
                z = self.multiply(self._gens[i], y)
                if z.length() < ell:
                    word.append(i)
                    y, ell = z, ell - 1
                    break
            else:  # pragma: no cover - a positive-length element always has a descent
                raise AssertionError(f"no left descent found for {x!r}")
        return word, y

    # subgroups and projections

    def eta(self, x: AffineElement) -> FiniteWeylElement:
        """Finite part: drop the translation."""
        return FiniteWeylElement(self.finite, x.matrix, x.delta_pow)

    def coroot_coordinates(self, chi) -> list[Fraction]:
        """Coordinates of a coweight in the simple-coroot basis."""
        # chi = sum_i a_i alpha_i^vee and alpha_i^vee is row i of the Cartan matrix
        cartan_t = [list(col) for col in zip(*self.rs.cartan)]
        return solve_rational(cartan_t, [int(v) for v in chi])

    def in_coroot_lattice(self, chi) -> bool:
        return all(a.denominator == 1 for a in self.coroot_coordinates(chi))

    def in_affine_weyl_group(self, x: AffineElement) -> bool:
        """Membership in W_a = Q^vee x| W0."""
        return x.delta_pow == 0 and self.in_coroot_lattice(x.chi)

    # Omega

    def tau(self, i: int | None, delta_pow: int = 0) -> OmegaElement:
        """tau_i delta^k with tau_i = t^{omega_i} w_0^{S0-{i}} w_0; ``i=None`` gives delta^k."""
        key = (i, delta_pow % self.delta_order)
        if key not in self._tau_cache:
            self._tau_cache[key] = self._make_tau(i, delta_pow)
        return self._tau_cache[key]

    def _make_tau(self, i: int | None, delta_pow: int) -> OmegaElement:
        if i is None:
            x = self.delta_element(delta_pow)
        else:
            if i not in self.rs.minuscule_indices:
                raise ValueError(f"omega_{i}^vee is not minuscule in {self.rs.name}")
            fin = self.finite
            others = [j for j in self.rs.nodes if j != i]
            w = fin.multiply(fin.longest_element(others), fin.longest_element())
            x = self.make(self.rs.fundamental_coweight(i), w)
            if x.length() != 0:
                raise AssertionError(f"tau_{i} has length {x.length()}; root data is inconsistent")
            if delta_pow % self.delta_order:
                x = self.multiply(x, self.delta_element(delta_pow))
        return OmegaElement(x, i, delta_pow % self.delta_order)

    def omega_group(self, with_delta: bool = False) -> list[OmegaElement]:
        """Omega (or Omega' with ``with_delta``): identity plus tau_i for minuscule i."""
        indices = [None] + sorted(self.rs.minuscule_indices)
        powers = range(self.delta_order) if with_delta else [0]
        return [self.tau(i, k) for k in powers for i in indices]

    def as_omega(self, x: AffineElement) -> OmegaElement:
        """Identify a length-zero element with its ``tau_i delta^k`` label."""
        if x.length() != 0:
            raise ValueError(f"{x} has positive length, not in Omega'")
        for om in self.omega_group(with_delta=True):
            if om.element == x:
                return om
        raise AssertionError(f"length-zero element {x!r} missing from Omega'")

    def node_permutation(self, x: AffineElement | OmegaElement) -> dict[int, int]:
        """Permutation pi of S~ with x s_j x^{-1} = s_{pi(j)}, for x of length zero."""
        if isinstance(x, OmegaElement):
            x = x.element
        xinv = self.inverse(x)
        lookup = {g.key: i for i, g in self._gens.items()}
        perm = {}
        for j, g in self._gens.items():
            y = self.multiply(self.multiply(x, g), xinv)
            if y.key not in lookup:
                raise ValueError(f"{x} does not normalise the simple reflections")
            perm[j] = lookup[y.key]
        return perm

    def omega_orbits(self, tau: AffineElement | OmegaElement) -> list[tuple[int, ...]]:
        return orbits(self.node_permutation(tau), self.nodes)

    def support(self, x: AffineElement, tau: AffineElement | OmegaElement) -> frozenset[int]:
        """Smallest tau-stable J in S~ with x in W_J x| <tau>."""
        t = tau.element if isinstance(tau, OmegaElement) else tau
        y = self.multiply(x, self.inverse(t))
        if not self.in_affine_weyl_group(y):
            raise ValueError(f"{x} does not lie in W_a {t}")
        word, rest = self.reduced_word(y)
        assert rest == self._identity, "reduced word of an element of W_a ended away from 1"
        perm = self.node_permutation(t)
        J = set(word)
        frontier = list(J)
        while frontier:
            j = perm[frontier.pop()]
            if j not in J:
                J.add(j)
                frontier.append(j)
        return frozenset(J)

    # order

    def is_finite_order(self, x: AffineElement) -> FiniteOrderWitness:
        n = self.finite.order(self.eta(x))
        y = self.power(x, n)
        return FiniteOrderWitness(n, tuple(int(v) for v in y.chi))

    # text form

    def format(self, x: AffineElement) -> str:
        parts = []
        if x.chi.any():
            parts.append("t[" + ",".join(str(int(v)) for v in x.chi) + "]")
        word = self.finite.reduced_word(x.w)
        parts.extend(f"s{i}" for i in word)
        if x.delta_pow:
            parts.append(f"d^{x.delta_pow}")
        return " ".join(parts) if parts else "e"

    def parse(self, text: str) -> AffineElement:
        """Inverse of :meth:`format`; also accepts ``s0`` and non-reduced words."""
        m = _ELEMENT_RE.match(text)
        x = self._identity
        if m.group("chi") is not None:
            entries = [int(v) for v in m.group("chi").replace(" ", "").split(",") if v]
            x = self.translation(entries)
        rest = m.group("rest")
        for tok in rest.replace(",", " ").split():
            if tok in ("e", "1"):
                continue
            if tok.startswith("s") and tok[1:].isdigit():
                x = self.multiply(x, self.simple_reflection(int(tok[1:])))
            elif tok.startswith("d^"):
                x = self.multiply(x, self.delta_element(int(tok[2:])))
            elif tok == "d":
                x = self.multiply(x, self.delta_element(1))
            elif tok.startswith("tau") and tok[3:].isdigit():
                x = self.multiply(x, self.tau(int(tok[3:])).element)
            else:
                raise ValueError(f"cannot parse token {tok!r} in element {text!r}")
        return x

    def affine_word_text(self, x: AffineElement) -> str:
        word, rest = self.reduced_word(x)
        om = self.as_omega(rest)
        letters = format_word(word) if word else ""
        tail = "" if (om.index is None and not om.delta_pow) else str(om)
        return " ".join(p for p in (letters, tail) if p) or "e"


def cayley_ball(group: AffineWeylGroup, radius: int) -> dict[AffineElement, int]:
    """Word-length ball around 1 in W_a, by breadth-first search over S~."""
    dist = {group.identity(): 0}
    frontier = [group.identity()]
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for i in group.nodes:
                y = group.multiply(x, group.simple_reflection(i))
                if y not in dist:
                    dist[y] = r
                    nxt.append(y)
        frontier = nxt
    return dist


def reduced_word_oracle(x: AffineElement, radius: int = 10) -> list[int] | None:
    """Geodesic word over S~ for the W_a-part of x by plain BFS, or None past ``radius``.

    Independent of the length formula; meant for checking it at small rank.
    """
    g = x.group
    target = g.multiply(x, g.delta_element(-x.delta_pow)) if x.delta_pow else x
    parent = {g.identity(): None}
    frontier = deque([(g.identity(), 0)])
    while frontier:
        y, d = frontier.popleft()
        if y == target:
            word = []
            while parent[y] is not None:
                prev, i = parent[y]
                word.append(i)
                y = prev
            return word[::-1]
        if d == radius:
            continue
        for i in g.nodes:
            z = g.multiply(y, g.simple_reflection(i))
            if z not in parent:
                parent[z] = (y, i)
                frontier.append((z, d + 1))
    return None
