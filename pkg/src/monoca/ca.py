"""Cellular automata over monoids.

A cellular automaton is a memory set ``S = (s_0, ..., s_{r-1})`` and a local
rule table indexed by the pattern ``(y(s_0), ..., y(s_{r-1}))`` read as a
base-``k`` number with ``s_0`` most significant.  It acts by

    tau(x)(m) = rule[x(s_0 m), ..., x(s_{r-1} m)].

Memory sets are kept sorted by element (``monoid.sort_key``) so that equal
(memory, rule) pairs give equal objects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .congruence import Congruence, quotient_monoid
from .monoid import (Bicyclic, FiniteMonoid, MonoidError, NatAdd, WordTooLong,
                     is_submonoid)
from .shift import Configuration, WindowConfiguration, configuration_array, pack_rows


class CAError(ValueError):
    pass


class AlphabetMismatch(CAError):
    pass


class MemoryNotContained(CAError):
    pass


class NotInjective(CAError):
    pass


def pattern_index(pattern: Sequence[int], k: int) -> int:
    idx = 0
    for v in pattern:
        idx = idx * k + v
    return idx


def pattern_of(index: int, k: int, r: int) -> tuple[int, ...]:
    out = [0] * r
    for i in range(r - 1, -1, -1):
        index, out[i] = divmod(index, k)
    return tuple(out)


def all_patterns(k: int, r: int):
    """Patterns in ascending rule-index order."""
    return itertools.product(range(k), repeat=r)


@dataclass(frozen=True)
class CellularAutomaton:
    monoid: Any
    alphabet_size: int
    memory: tuple
    rule: tuple[int, ...]

    def __post_init__(self):
        M = self.monoid
        k = self.alphabet_size
        if k < 1:
            raise CAError("alphabet size must be at least 1")
        memory = tuple(M.check(s) for s in self.memory)
        if len(set(memory)) != len(memory):
            raise CAError("memory elements must be distinct")
        rule = tuple(int(v) for v in self.rule)
        r = len(memory)
        if len(rule) != k ** r:
            raise CAError(f"rule table needs {k ** r} entries, got {len(rule)}")
        if any(not 0 <= v < k for v in rule):
            raise CAError("rule output out of alphabet range")
        order = sorted(range(r), key=lambda i: M.sort_key(memory[i]))
        if order != list(range(r)):
            canon_memory = tuple(memory[i] for i in order)
            # canonical pattern p has p[j] = value at memory[order[j]]
            new_rule = []
            for p in all_patterns(k, r):
                old = [0] * r
                for j, i in enumerate(order):
                    old[i] = p[j]
                new_rule.append(rule[pattern_index(old, k)])
            memory, rule = canon_memory, tuple(new_rule)
        object.__setattr__(self, "memory", memory)
        object.__setattr__(self, "rule", rule)

    @classmethod
    def from_function(cls, M, k: int, memory: Sequence, f: Callable[[tuple], int]):
        """Build from ``f(pattern)`` where ``pattern`` follows the given memory order."""
        memory = tuple(memory)
        rule = tuple(f(p) for p in all_patterns(k, len(memory)))
        return cls(M, k, memory, rule)

    @property
    def radius(self) -> int:
        return len(self.memory)

    def local(self, pattern: Sequence[int]) -> int:
        return self.rule[pattern_index(pattern, self.alphabet_size)]

    def __repr__(self) -> str:
        mem = ", ".join(str(s) for s in self.memory)
        return f"CellularAutomaton(k={self.alphabet_size}, memory=[{mem}], rule={self.rule})"


# ---------------------------------------------------------------- examples

def identity_ca(M, k: int) -> CellularAutomaton:
    return CellularAutomaton(M, k, (M.identity,), tuple(range(k)))


def constant_ca(M, k: int, a: int) -> CellularAutomaton:
    return CellularAutomaton(M, k, (), (a,))


def cellwise_ca(M, k: int, f: Sequence[int]) -> CellularAutomaton:
    """``x -> f o x`` for a symbol map ``f``."""
    return CellularAutomaton(M, k, (M.identity,), tuple(f))


def translation_ca(M, k: int, m) -> CellularAutomaton:
    """``x -> x o L_m``, i.e. ``tau(x)(u) = x(m u)``."""
    return CellularAutomaton(M, k, (m,), tuple(range(k)))


def majority_ca(M, S0: Iterable) -> CellularAutomaton:
    """Binary majority rule over ``S0``; ties keep the current value."""
    S0 = list(dict.fromkeys(S0))
    memory = list(S0)
    if M.identity not in memory:
        memory.append(M.identity)
    pos = memory.index(M.identity)

    def f(p):
        total = sum(p[i] for i in range(len(S0)))
        if 2 * total > len(S0):
            return 1
        if 2 * total == len(S0):
            return p[pos]
        return 0

    return CellularAutomaton.from_function(M, 2, memory, f)


# ---------------------------------------------------------------- evaluation

def _check_finite(tau: CellularAutomaton) -> FiniteMonoid:
    if not isinstance(tau.monoid, FiniteMonoid):
        raise CAError("exact evaluation needs a finite monoid; use apply_windowed")
    return tau.monoid


def apply(tau: CellularAutomaton, x: Configuration) -> Configuration:
    M = _check_finite(tau)
    if x.monoid != M:
        raise CAError("configuration lives on a different monoid")
    if x.alphabet_size != tau.alphabet_size:
        raise AlphabetMismatch(f"alphabet {x.alphabet_size} != {tau.alphabet_size}")
    t = M.table
    sym = x.symbols
    out = tuple(tau.local([sym[t[s][m]] for s in tau.memory]) for m in range(M.size))
    return Configuration(M, tau.alphabet_size, out)


def image_table(tau: CellularAutomaton) -> np.ndarray:
    """Outputs for every configuration: row ``v`` is ``tau(unpack(v))``."""
    M = _check_finite(tau)
    k, n, r = tau.alphabet_size, M.size, tau.radius
    X = configuration_array(n, k)
    rule = np.asarray(tau.rule, dtype=np.int64)
    if r == 0:
        return np.full((k ** n, n), rule[0], dtype=np.int64)
    cols = np.array([[M.table[s][m] for s in tau.memory] for m in range(n)], dtype=np.int64)
    weights = k ** np.arange(r - 1, -1, -1, dtype=np.int64)
    idx = X[:, cols] @ weights
    return rule[idx]


def packed_images(tau: CellularAutomaton) -> np.ndarray:
    return pack_rows(image_table(tau), tau.alphabet_size)


def same_map(tau1: CellularAutomaton, tau2: CellularAutomaton) -> bool:
    """Pointwise equality on every configuration (finite monoids)."""
    if tau1.monoid != tau2.monoid or tau1.alphabet_size != tau2.alphabet_size:
        return False
    return bool(np.array_equal(packed_images(tau1), packed_images(tau2)))


def _product_or_none(M, s, m):
    try:
        return M.mul(s, m)
    except WordTooLong:
        return None


def apply_windowed(tau: CellularAutomaton, x: WindowConfiguration) -> WindowConfiguration:
    """Evaluate ``tau`` on every ``m`` of the input window whose inputs
    ``s m`` (``s`` in the memory) all lie in the window."""
    if x.alphabet_size != tau.alphabet_size:
        raise AlphabetMismatch(f"alphabet {x.alphabet_size} != {tau.alphabet_size}")
    if x.monoid != tau.monoid:
        raise CAError("window configuration lives on a different monoid")
    M = tau.monoid
    vals = x.values
    out = {}
    for m in vals:
        inputs = [_product_or_none(M, s, m) for s in tau.memory]
        if all(u is not None and u in vals for u in inputs):
            out[m] = tau.local([vals[u] for u in inputs])
    return WindowConfiguration(M, x.alphabet_size, out)


# ---------------------------------------------------------------- calculus

def _same_space(tau1: CellularAutomaton, tau2: CellularAutomaton) -> None:
    if tau1.monoid != tau2.monoid:
        raise CAError("automata over different monoids")
    if tau1.alphabet_size != tau2.alphabet_size:
        raise AlphabetMismatch("automata over different alphabets")


def compose(tau1: CellularAutomaton, tau2: CellularAutomaton) -> CellularAutomaton:
    """``tau1 o tau2`` with memory ``S2 S1`` = {s2 s1}."""
    _same_space(tau1, tau2)
    M = tau1.monoid
    k = tau1.alphabet_size
    S1, S2 = tau1.memory, tau2.memory
    prods = {(s2, s1): M.mul(s2, s1) for s1 in S1 for s2 in S2}
    S = sorted(set(prods.values()), key=M.sort_key)
    pos = {s: i for i, s in enumerate(S)}
    slots = [[pos[prods[s2, s1]] for s2 in S2] for s1 in S1]

    def mu(y):
        ybar = [tau2.local([y[j] for j in row]) for row in slots]
        return tau1.local(ybar)

    return CellularAutomaton.from_function(M, k, S, mu)


def essential_coordinates(tau: CellularAutomaton) -> list[int]:
    """Positions ``i`` such that changing only ``y(s_i)`` can change the output."""
    k, r = tau.alphabet_size, tau.radius
    if r == 0:
        return []
    arr = np.asarray(tau.rule).reshape((k,) * r)
    out = []
    for i in range(r):
        first = np.take(arr, [0], axis=i)
        if not np.all(arr == first):
            out.append(i)
    return out


def minimal_memory(tau: CellularAutomaton) -> CellularAutomaton:
    """Same map, memory reduced to the essential coordinates."""
    k, r = tau.alphabet_size, tau.radius
    keep = essential_coordinates(tau)
    if len(keep) == r:
        return tau
    if r == 0:
        return tau
    arr = np.asarray(tau.rule).reshape((k,) * r)
    index = tuple(slice(None) if i in keep else 0 for i in range(r))
    rule = tuple(int(v) for v in arr[index].reshape(-1))
    return CellularAutomaton(tau.monoid, k, tuple(tau.memory[i] for i in keep), rule)


def with_memory(tau: CellularAutomaton, memory: Iterable) -> CellularAutomaton:
    """Re-express ``tau`` over a memory set containing its current one."""
    memory = tuple(memory)
    missing = [s for s in tau.memory if s not in memory]
    if missing:
        raise MemoryNotContained(f"memory {memory} misses {missing}")
    pos = [memory.index(s) for s in tau.memory]
    return CellularAutomaton.from_function(
        tau.monoid, tau.alphabet_size, memory, lambda p: tau.local([p[i] for i in pos]))


class SubmonoidContext:
    """A submonoid ``N`` of an ambient monoid together with the two-way
    translation between ambient elements and elements of ``N`` as a monoid
    in its own right."""

    def __init__(self, ambient, sub, to_ambient: Callable, to_sub: Callable):
        self.ambient = ambient
        self.sub = sub
        self.to_ambient = to_ambient
        self.to_sub = to_sub

    @classmethod
    def finite(cls, M: FiniteMonoid, members: Iterable[int]) -> "SubmonoidContext":
        members = sorted(set(members))
        if not is_submonoid(M, members):
            raise MonoidError(f"{members} is not a submonoid")
        index = {m: i for i, m in enumerate(members)}
        table = [[index[M.table[a][b]] for b in members] for a in members]
        N = FiniteMonoid(len(members), index[M.identity], table)
        ctx = cls(M, N, members.__getitem__, index.get)
        ctx.members = tuple(members)
        return ctx

    @classmethod
    def bicyclic_p(cls) -> "SubmonoidContext":
        """``<p>`` inside the bicyclic monoid, identified with ``NatAdd`` via p^n <-> n."""
        B = Bicyclic()

        def to_sub(m):
            return m[1] if m[0] == 0 else None

        return cls(B, NatAdd(), lambda n: B.check((0, n)), to_sub)

    def contains(self, m) -> bool:
        return self.to_sub(m) is not None


def restrict(tau: CellularAutomaton, ctx: SubmonoidContext) -> CellularAutomaton:
    """The restriction ``tau_N``; requires the minimal memory to lie in ``N``."""
    if tau.monoid != ctx.ambient:
        raise CAError("automaton is not over the context's ambient monoid")
    source = tau
    if not all(ctx.contains(s) for s in tau.memory):
        source = minimal_memory(tau)
        outside = [s for s in source.memory if not ctx.contains(s)]
        if outside:
            raise MemoryNotContained(f"minimal memory elements {outside} lie outside the submonoid")
    memory = [ctx.to_sub(s) for s in source.memory]
    return CellularAutomaton.from_function(ctx.sub, source.alphabet_size, memory, source.local)


def induce(sigma: CellularAutomaton, ctx: SubmonoidContext) -> CellularAutomaton:
    """The automaton ``sigma^M`` induced on the ambient monoid."""
    if sigma.monoid != ctx.sub:
        raise CAError("automaton is not over the context's submonoid")
    memory = [ctx.to_ambient(s) for s in sigma.memory]
    return CellularAutomaton.from_function(ctx.ambient, sigma.alphabet_size, memory, sigma.local)


def quotient_ca(tau: CellularAutomaton, gamma: Congruence) -> CellularAutomaton:
    """The automaton induced on ``M/gamma`` by conjugating ``tau`` restricted
    to gamma-invariant configurations."""
    M = _check_finite(tau)
    Q, proj = quotient_monoid(M, gamma)
    S_q = sorted({proj[s] for s in tau.memory})
    pos = {c: i for i, c in enumerate(S_q)}
    slots = [pos[proj[s]] for s in tau.memory]
    return CellularAutomaton.from_function(
        Q, tau.alphabet_size, S_q, lambda z: tau.local([z[j] for j in slots]))


def lift_ca(sigma: CellularAutomaton, gamma: Congruence, M: FiniteMonoid) -> CellularAutomaton:
    """A preimage of ``sigma`` under ``quotient_ca(., gamma)``.

    Memory is the transversal of ``sigma``'s memory made of the smallest
    element of each class.
    """
    Q, _ = quotient_monoid(M, gamma)
    if sigma.monoid != Q:
        raise CAError("automaton is not over M/gamma")
    reps = [blk[0] for blk in gamma.classes()]
    memory = [reps[c] for c in sigma.memory]
    return CellularAutomaton.from_function(M, sigma.alphabet_size, memory, sigma.local)


def left_inverse_ca(tau: CellularAutomaton) -> CellularAutomaton:
    """An automaton ``sigma`` with ``sigma o tau = Id`` for injective ``tau``.

    The memory is all of M; a pattern ``u`` equal to some ``tau(x)`` maps to
    ``x(1)``, every other pattern to 0.
    """
    M = _check_finite(tau)
    k, n = tau.alphabet_size, M.size
    images = packed_images(tau)
    seen = np.full(k ** n, -1, dtype=np.int64)
    for v, w in enumerate(images.tolist()):
        if seen[w] >= 0:
            raise NotInjective(f"configurations {int(seen[w])} and {v} have the same image")
        seen[w] = v
    e = M.identity
    # memory (0, ..., n-1) in order, so pattern digit i is u(i), most significant first
    rule = [0] * (k ** n)
    weights = [k ** (n - 1 - i) for i in range(n)]
    for w in range(k ** n):
        v = int(seen[w])
        if v < 0:
            continue
        u = [(w // k ** i) % k for i in range(n)]
        idx = sum(u[i] * weights[i] for i in range(n))
        rule[idx] = (v // k ** e) % k
    return CellularAutomaton(M, k, tuple(range(n)), tuple(rule))
