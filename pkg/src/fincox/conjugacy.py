"""Descent closures and minimal-length elements of W_a-conjugacy classes.

``x -> y`` means y is reached from x by a chain of conjugations ``s_i . s_i``
(i in S~) none of which increases length.  For classes with finite Coxeter part
every minimal-length element of the class is reachable from every element, so
the minimal stratum of a closure is the full set of minimal-length elements.
"""

from __future__ import annotations

import heapq
import itertools
import os
from dataclasses import dataclass
from typing import Iterable

from .affine_weyl import AffineElement, AffineWeylGroup, OmegaElement
from .finite_weyl import orbits

__all__ = [
    "DEFAULT_NODE_BUDGET",
    "BudgetExceeded",
    "DescentClosure",
    "ClassReport",
    "descent_closure",
    "has_finite_coxeter_part",
    "parabolic_coxeter_elements",
    "verify_main_theorem",
    "omega_translate_class",
    "omega_centralizer",
    "random_conjugate",
]

DEFAULT_NODE_BUDGET = int(os.environ.get("FINCOX_NODE_BUDGET", 1_000_000))

CHECK_NAMES = (
    "is_finite_coxeter_part",
    "support_constant_on_minimal",
    "J_proper",
    "J_tau_stable",
    "J_maximal",
    "minimal_equals_parabolic_coxeters",
)


class BudgetExceeded(RuntimeError):
    def __init__(self, closure: "DescentClosure"):
        super().__init__(
            f"descent closure from {closure.start} passed {len(closure.reachable)} elements"
        )
        self.closure = closure


@dataclass
class DescentClosure:
    start: AffineElement
    reachable: set[AffineElement]
    minimal: frozenset[AffineElement]
    edge_log: list[tuple[AffineElement, int, AffineElement]] | None = None
    overflow: bool = False

    @property
    def min_length(self) -> int:
        return next(iter(self.minimal)).length() if self.minimal else self.start.length()


def descent_closure(
    start: AffineElement,
    budget: int | None = None,
    log_edges: bool = False,
) -> DescentClosure:
    """All y with ``start -> y``, explored shortest-first.

    If more than ``budget`` elements turn up the search stops and the returned
    closure has ``overflow=True``; its ``minimal`` set is then only an upper bound.
    """
    g = start.group
    budget = DEFAULT_NODE_BUDGET if budget is None else budget
    seen = {start}
    log = [] if log_edges else None
    counter = itertools.count()
    heap = [(start.length(), start.key, next(counter), start)]
    overflow = False
    while heap:
        ell, _, _, x = heapq.heappop(heap)
        for i in g.nodes:
            y = g.simple_conjugate(i, x)
            if y.length() > ell:
                continue
            if log is not None:
                log.append((x, i, y))
            if y in seen:
                continue
            seen.add(y)
            if len(seen) > budget:
                overflow = True
                heap = []
                break
            heapq.heappush(heap, (y.length(), y.key, next(counter), y))
    low = min(y.length() for y in seen)
    minimal = frozenset(y for y in seen if y.length() == low)
    return DescentClosure(start, seen, minimal, log, overflow)


def has_finite_coxeter_part(x: AffineElement) -> bool:
    """Whether the finite part of x is W0-conjugate to a Coxeter element of its coset."""
    g = x.group
    return g.finite.is_coxeter_class(g.eta(x))


def _tau_element(tau: OmegaElement | AffineElement) -> AffineElement:
    return tau.element if isinstance(tau, OmegaElement) else tau


def parabolic_coxeter_elements(J: Iterable[int], tau: OmegaElement | AffineElement) -> set[AffineElement]:
    """Coxeter elements of W_J x| <tau> lying in W_J tau.

    One reflection per tau-orbit on J, multiplied in every order, then times tau.
    """
    t = _tau_element(tau)
    g = t.group
    J = frozenset(J)
    perm = g.node_permutation(t)
    if {perm[j] for j in J} != J:
        raise ValueError(f"J={sorted(J)} is not stable under {tau}")
    if J == frozenset(g.nodes):
        raise ValueError("J must be a proper subset of the affine nodes")
    orbs = orbits(perm, J)
    out = set()
    for reps in itertools.product(*orbs):
        for order in itertools.permutations(reps):
            out.add(g.multiply(g.from_word(order), t))
    return out


def is_maximal_proper(J: frozenset[int], perm: dict[int, int], nodes) -> bool:
    """J is the complement of exactly one orbit."""
    rest = frozenset(nodes) - J
    if not rest:
        return False
    return len(orbits(perm, rest)) == 1


@dataclass
class ClassReport:
    tau: OmegaElement
    representative: AffineElement
    J_found: frozenset[int] | None
    minimal_set: list[AffineElement]
    checks: dict[str, bool]
    closure_size: int = 0
    min_length: int | None = None
    start: AffineElement | None = None
    edge_log: list | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self, include_edges: bool = False) -> dict:
        g = self.representative.group
        out = {
            "group": g.name,
            "tau": self.tau.label,
            "representative": str(self.representative),
            "start": str(self.start if self.start is not None else self.representative),
            "J": None if self.J_found is None else sorted(self.J_found),
            "min_length": self.min_length,
            "closure_size": self.closure_size,
            "minimal_set": [str(m) for m in self.minimal_set],
            "checks": {name: self.checks.get(name, False) for name in CHECK_NAMES},
            "passed": self.passed,
        }
        if include_edges and self.edge_log is not None:
            out["edge_log"] = [[str(a), i, str(b)] for a, i, b in self.edge_log]
        return out


def verify_main_theorem(
    representative: AffineElement,
    tau: OmegaElement,
    budget: int | None = None,
    start: AffineElement | None = None,
    log_edges: bool = False,
) -> ClassReport:
    """Compute the minimal stratum of the class and compare it with the Coxeter
    elements of W_J x| <tau> for J = supp of a minimal element.

    ``start`` (default: the representative) is where the descent search begins;
    it must be W_a-conjugate to the representative.
    """
    g = representative.group
    t = tau.element
    y = g.multiply(representative, g.inverse(t))
    if not g.in_affine_weyl_group(y):
        raise ValueError(f"{representative} is not in W_a {tau}")
    finite_cox = has_finite_coxeter_part(representative)
    if not finite_cox:
        raise ValueError(f"{representative} does not have finite Coxeter part")
    origin = representative if start is None else start
    closure = descent_closure(origin, budget, log_edges)
    if closure.overflow:
        raise BudgetExceeded(closure)
    minimal = sorted(closure.minimal, key=AffineElement.sort_key)
    supports = {g.support(m, t) for m in minimal}
    perm = g.node_permutation(t)
    checks = {"is_finite_coxeter_part": finite_cox}
    checks["support_constant_on_minimal"] = len(supports) == 1
    J = min(supports, key=lambda s: (len(s), sorted(s))) if supports else None
    nodes = frozenset(g.nodes)
    checks["J_proper"] = J is not None and J != nodes
    checks["J_tau_stable"] = J is not None and {perm[j] for j in J} == J
    checks["J_maximal"] = J is not None and is_maximal_proper(J, perm, nodes)
    if checks["J_proper"] and checks["J_tau_stable"]:
        expected = parabolic_coxeter_elements(J, t)
        checks["minimal_equals_parabolic_coxeters"] = expected == set(minimal)
    else:
        checks["minimal_equals_parabolic_coxeters"] = False
    return ClassReport(
        tau=tau,
        representative=representative,
        J_found=J,
        minimal_set=minimal,
        checks=checks,
        closure_size=len(closure.reachable),
        min_length=minimal[0].length() if minimal else None,
        start=origin,
        edge_log=closure.edge_log,
    )


def omega_translate_class(x: AffineElement, sigma: OmegaElement | AffineElement) -> AffineElement:
    """sigma x sigma^{-1}."""
    s = _tau_element(sigma)
    return s.group.conjugate(s, x)


def omega_centralizer(g: AffineWeylGroup, tau: OmegaElement) -> list[OmegaElement]:
    """sigma in Omega with sigma tau sigma^{-1} = tau; these move classes inside W_a tau."""
    return [s for s in g.omega_group() if g.conjugate(s.element, tau.element) == tau.element]


def random_conjugate(x: AffineElement, rng, max_length: int = 6) -> AffineElement:
    """u x u^{-1} for a random word u over S~ of length at most ``max_length``."""
    g = x.group
    n = rng.randint(0, max_length)
    u = g.from_word([rng.choice(g.nodes) for _ in range(n)])
    return g.conjugate(u, x)
