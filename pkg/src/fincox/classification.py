"""Kottwitz map, delta-coinvariants of P^vee/Q^vee and the lattice identity behind
the classification of classes with finite Coxeter part.

Lattices live in P^vee with fundamental-coweight coordinates.  Q^vee is spanned by
the rows of the Cartan matrix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .affine_weyl import AffineElement, AffineWeylGroup
from .finite_weyl import FiniteWeylElement
from .lattice import (
    column_lattice_hnf,
    hermite_normal_form,
    in_lattice,
    reduce_mod_lattice,
    smith_invariants,
    solve_integer,
)

__all__ = [
    "CoinvariantGroup",
    "LatticeCertificate",
    "kottwitz",
    "lattice_identity_check",
    "classify_representative",
    "bounded_conjugacy_search",
]


class CoinvariantGroup:
    """(P^vee/Q^vee)_delta = P^vee / (Q^vee + (1 - delta) P^vee) for a power of the group's delta."""

    def __init__(self, group: AffineWeylGroup, delta_pow: int = 1):
        self.group = group
        self.delta_pow = delta_pow % group.delta_order
        rs = group.rs
        n = rs.rank
        d = group.delta_element(self.delta_pow).matrix
        rel = [list(r) for r in rs.cartan]
        one_minus_d = np.eye(n, dtype=np.int64) - d
        rel += [list(map(int, col)) for col in one_minus_d.T]
        self.relations = rel
        self.basis = hermite_normal_form(rel)
        self.invariants = [d for d in smith_invariants(rel) if d != 1]
        order_hnf = 1
        for k, row in enumerate(self.basis):
            order_hnf *= row[k]
        order_snf = 1
        for d in self.invariants:
            order_snf *= d
        if order_hnf != order_snf:
            raise AssertionError(f"coinvariant order mismatch: {order_hnf} vs {order_snf}")
        self.order = order_hnf

    def reduce(self, chi) -> tuple[int, ...]:
        return reduce_mod_lattice([int(v) for v in chi], self.basis)

    def zero(self) -> tuple[int, ...]:
        return tuple([0] * self.group.rank)

    def elements(self) -> list[tuple[int, ...]]:
        """Every class, as its canonical representative, by closing the generators."""
        gens = [self.reduce(w) for w in self.group.rs.fundamental_coweights]
        seen = {self.zero()}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for g in gens:
                u = self.reduce([a + b for a, b in zip(v, g)])
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return sorted(seen)

    def describe(self) -> str:
        if not self.invariants:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariants)

    def to_dict(self) -> dict:
        return {
            "delta_pow": self.delta_pow,
            "order": self.order,
            "structure": self.describe(),
            "invariants": self.invariants,
            "hermite_basis": self.basis,
        }


def kottwitz(x: AffineElement, delta_pow: int, coinvariants: CoinvariantGroup | None = None) -> tuple[int, ...]:
    """Class of the translation part of x in (P^vee/Q^vee)_delta, for x in W~ delta^k."""
    g = x.group
    if x.delta_pow != delta_pow % g.delta_order:
        raise ValueError(f"element has delta power {x.delta_pow}, expected {delta_pow}")
    cg = coinvariants or CoinvariantGroup(g, delta_pow)
    return cg.reduce(x.chi)


@dataclass
class LatticeCertificate:
    coxeter: str
    delta_pow: int
    image_basis: list[list[int]]
    target_basis: list[list[int]]
    preimages: dict[int, tuple[int, ...]] = field(default_factory=dict)
    inclusion: bool = False
    coroots_in_image: bool = False
    equal: bool = False

    def __bool__(self):
        return self.equal and self.coroots_in_image and self.inclusion

    def to_dict(self) -> dict:
        return {
            "coxeter": self.coxeter,
            "delta_pow": self.delta_pow,
            "image_basis": self.image_basis,
            "target_basis": self.target_basis,
            "preimages": {str(i): list(v) for i, v in self.preimages.items()},
            "inclusion": self.inclusion,
            "coroots_in_image": self.coroots_in_image,
            "equal": self.equal,
        }


def lattice_identity_check(c_delta: FiniteWeylElement) -> LatticeCertificate:
    """Compare (1 - c delta) P^vee with (1 - delta) P^vee + Q^vee.

    Also records, for each simple coroot, an integer coweight mapped onto it by
    ``1 - c delta``, re-checked by multiplication.
    """
    fin = c_delta.group
    rs = fin.rs
    if not fin.is_coxeter_element(c_delta):
        raise ValueError(f"{c_delta} is not a Coxeter element")
    n = rs.rank
    one_minus = np.eye(n, dtype=np.int64) - c_delta.matrix
    image = column_lattice_hnf(one_minus.tolist())
    d = fin.delta_element(c_delta.delta_pow).matrix
    gens = [list(r) for r in rs.cartan] + [list(map(int, col)) for col in (np.eye(n, dtype=np.int64) - d).T]
    target = hermite_normal_form(gens)
    cert = LatticeCertificate(str(c_delta), c_delta.delta_pow, image, target)
    cert.inclusion = all(in_lattice(row, target) for row in image)
    ok = True
    for i in rs.nodes:
        coroot = rs.simple_coroot(i)
        pre = solve_integer(one_minus.tolist(), coroot)
        if pre is None or tuple(int(v) for v in one_minus @ np.array(pre)) != tuple(coroot):
            ok = False
            continue
        cert.preimages[i] = pre
    cert.coroots_in_image = ok
    cert.equal = image == target
    return cert


def classify_representative(c_delta: FiniteWeylElement, v, group: AffineWeylGroup) -> AffineElement:
    """t^mu c delta for the canonical lift mu of the coinvariant class v."""
    cg = CoinvariantGroup(group, c_delta.delta_pow)
    mu = cg.reduce(v)
    return group.make(mu, c_delta)


def bounded_conjugacy_search(x: AffineElement, y: AffineElement, radius: int = 6) -> bool:
    """Search the conjugates of x under W~ (generated by S~ and Omega) out to ``radius`` steps."""
    g = x.group
    gens = [g.simple_reflection(i) for i in g.nodes]
    gens += [om.element for om in g.omega_group() if om.index is not None]
    gens += [g.inverse(t) for t in gens[len(g.nodes):]]
    seen = {x}
    frontier = [x]
    for _ in range(radius):
        if y in seen:
            return True
        nxt = []
        for z in frontier:
            for s in gens:
                u = g.conjugate(s, z)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return y in seen
