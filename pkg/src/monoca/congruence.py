"""Congruences on finite monoids, quotients, kernels and the marked-monoid
window relation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .monoid import FiniteMonoid, MonoidError, MonoidMorphism, monoid_predicates

DEFAULT_ENUMERATION_CAP = 8


class CapExceeded(RuntimeError):
    """A configured size cap would be exceeded."""


def canonical_labels(labels: Sequence) -> tuple[int, ...]:
    """Relabel blocks by order of first appearance."""
    seen: dict = {}
    return tuple(seen.setdefault(v, len(seen)) for v in labels)


@dataclass(frozen=True)
class Congruence:
    """A congruence stored as canonical block labels ``class_of[i]``."""

    monoid: FiniteMonoid
    class_of: tuple[int, ...]

    def __post_init__(self):
        labels = canonical_labels(self.class_of)
        if len(labels) != self.monoid.size:
            raise MonoidError("class_of length differs from monoid size")
        object.__setattr__(self, "class_of", labels)
        t = self.monoid.table
        n = self.monoid.size
        # it suffices to test one representative per class against every element
        rep = {}
        for i, c in enumerate(labels):
            rep.setdefault(c, i)
        for i in range(n):
            r = rep[labels[i]]
            if r == i:
                continue
            for j in range(n):
                if labels[t[i][j]] != labels[t[r][j]] or labels[t[j][i]] != labels[t[j][r]]:
                    raise MonoidError("partition is not compatible with multiplication")

    @classmethod
    def diagonal(cls, M: FiniteMonoid) -> "Congruence":
        return cls(M, tuple(range(M.size)))

    @classmethod
    def full(cls, M: FiniteMonoid) -> "Congruence":
        return cls(M, (0,) * M.size)

    @property
    def num_classes(self) -> int:
        return max(self.class_of) + 1

    def classes(self) -> list[tuple[int, ...]]:
        blocks: list[list[int]] = [[] for _ in range(self.num_classes)]
        for i, c in enumerate(self.class_of):
            blocks[c].append(i)
        return [tuple(b) for b in blocks]

    def related(self, a: int, b: int) -> bool:
        return self.class_of[a] == self.class_of[b]

    def pairs(self) -> frozenset[tuple[int, int]]:
        n = self.monoid.size
        return frozenset((a, b) for a in range(n) for b in range(n) if self.related(a, b))

    def is_diagonal(self) -> bool:
        return self.num_classes == self.monoid.size

    def __le__(self, other: "Congruence") -> bool:
        """Inclusion of relations."""
        n = self.monoid.size
        return all(other.related(a, b) for a in range(n) for b in range(n) if self.related(a, b))

    def __repr__(self) -> str:
        return f"Congruence({self.classes()})"


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def congruence_closure(M: FiniteMonoid, pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Smallest congruence containing ``pairs``."""
    n = M.size
    t = M.table
    uf = _UnionFind(n)
    pending = []
    for a, b in pairs:
        M.check(a)
        M.check(b)
        if uf.union(a, b):
            pending.append((a, b))
    # every generating pair (a, b) must be saturated on both sides
    while pending:
        a, b = pending.pop()
        for c in range(n):
            for x, y in ((t[a][c], t[b][c]), (t[c][a], t[c][b])):
                if uf.union(x, y):
                    pending.append((x, y))
    return Congruence(M, tuple(uf.find(i) for i in range(n)))


def join(g1: Congruence, g2: Congruence) -> Congruence:
    pairs = [pr for g in (g1, g2) for pr in _spanning_pairs(g)]
    return congruence_closure(g1.monoid, pairs)


def _spanning_pairs(g: Congruence):
    first = {}
    for i, c in enumerate(g.class_of):
        if c in first:
            yield first[c], i
        else:
            first[c] = i


def meet(g1: Congruence, g2: Congruence) -> Congruence:
    """Intersection of two congruences (the partition meet)."""
    if g1.monoid != g2.monoid:
        raise MonoidError("congruences over different monoids")
    labels = tuple(zip(g1.class_of, g2.class_of))
    # the Congruence constructor re-verifies compatibility
    return Congruence(g1.monoid, labels)


def meet_all(M: FiniteMonoid, family: Iterable[Congruence]) -> Congruence:
    result = Congruence.full(M)
    for g in family:
        result = meet(result, g)
    return result


def enumerate_congruences(M: FiniteMonoid, cap: int = DEFAULT_ENUMERATION_CAP) -> list[Congruence]:
    """All congruences on ``M``, sorted by (num_classes desc, class_of).

    Every congruence is a join of principal congruences, so the lattice is
    generated from the diagonal by joining principal ones until no new
    congruence appears.
    """
    if M.size > cap:
        raise CapExceeded(f"monoid size {M.size} exceeds enumeration cap {cap}")
    n = M.size
    principal = {}
    for a in range(n):
        for b in range(a + 1, n):
            g = congruence_closure(M, [(a, b)])
            principal[g.class_of] = g
    found = {tuple(range(n)): Congruence.diagonal(M)}
    found.update(principal)
    frontier = list(principal.values())
    gens = list(principal.values())
    while frontier:
        new = []
        for g in frontier:
            for h in gens:
                if h <= g:
                    continue
                j = join(g, h)
                if j.class_of not in found:
                    found[j.class_of] = j
                    new.append(j)
        frontier = new
    return sorted(found.values(), key=lambda g: (-g.num_classes, g.class_of))


def quotient_monoid(M: FiniteMonoid, gamma: Congruence) -> tuple[FiniteMonoid, tuple[int, ...]]:
    """Return ``(M/gamma, projection)`` where ``projection[m]`` is the class of m."""
    if gamma.monoid != M:
        raise MonoidError("congruence belongs to a different monoid")
    reps = [blk[0] for blk in gamma.classes()]
    proj = gamma.class_of
    table = [[proj[M.table[a][b]] for b in reps] for a in reps]
    Q = FiniteMonoid(len(reps), proj[M.identity], table,
                     name=f"{M.name}/~" if M.name else "")
    return Q, proj


def projection_morphism(M: FiniteMonoid, gamma: Congruence) -> MonoidMorphism:
    Q, proj = quotient_monoid(M, gamma)
    return MonoidMorphism(M, Q, proj)


def kernel_congruence(phi: MonoidMorphism) -> Congruence:
    """``{(m, m') : phi(m) = phi(m')}`` for a finite-source morphism."""
    if not isinstance(phi.source, FiniteMonoid):
        raise MonoidError("kernel congruence needs a finite source")
    return Congruence(phi.source, phi.images)


def marked_window_agree(g1: Congruence, g2: Congruence, window: Iterable[tuple[int, int]]) -> bool:
    """True when ``g1`` and ``g2`` contain the same pairs from ``window``."""
    if g1.monoid != g2.monoid:
        raise MonoidError("congruences over different monoids")
    return all(g1.related(a, b) == g2.related(a, b) for a, b in window)


RESIDUAL_PROPERTIES = ("finite", "cancellative_commutative")


@dataclass(frozen=True)
class ResidualCheck:
    property: str
    holds: bool
    meet: Congruence
    witness_family: tuple[Congruence, ...]


def _quotient_has(M: FiniteMonoid, gamma: Congruence, prop: str) -> bool:
    if prop == "finite":
        return True
    Q, _ = quotient_monoid(M, gamma)
    p = monoid_predicates(Q)
    return p.commutative and p.cancellative


def residually_P_check(M: FiniteMonoid, prop: str,
                       cap: int = DEFAULT_ENUMERATION_CAP) -> ResidualCheck:
    """Decide whether the congruences with a ``prop`` quotient meet in the diagonal.

    The witness family is the set of inclusion-minimal qualifying congruences,
    whose meet equals the meet of all qualifying ones.
    """
    if prop not in RESIDUAL_PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; expected one of {RESIDUAL_PROPERTIES}")
    good = [g for g in enumerate_congruences(M, cap) if _quotient_has(M, g, prop)]
    minimal = tuple(g for g in good if not any(h != g and h <= g for h in good))
    m = meet_all(M, minimal)
    return ResidualCheck(prop, m.is_diagonal(), m, minimal)
