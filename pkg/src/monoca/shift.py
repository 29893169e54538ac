"""Configurations, the shift action and periodic structure.

A configuration over a finite monoid is stored as a tuple of symbols in
element-index order.  Its packed form is the base-``k`` integer with the
symbol at element ``i`` as digit ``i`` (for ``k = 2``, bit ``i``); sets of
configurations are sorted tuples of packed values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

import numpy as np

from .congruence import Congruence, enumerate_congruences
from .monoid import (FiniteMonoid, FreeMonoid, MonoidError, MonoidMorphism, NatAdd,
                     cyclic, trivial, truncated_free)


@dataclass(frozen=True)
class Configuration:
    monoid: FiniteMonoid
    alphabet_size: int
    symbols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if self.alphabet_size < 1:
            raise ValueError("alphabet size must be at least 1")
        if len(self.symbols) != self.monoid.size:
            raise ValueError(f"expected {self.monoid.size} symbols, got {len(self.symbols)}")
        if any(not 0 <= s < self.alphabet_size for s in self.symbols):
            raise ValueError("symbol out of alphabet range")

    def __getitem__(self, m: int) -> int:
        return self.symbols[m]

    def pack(self) -> int:
        return pack(self.symbols, self.alphabet_size)

    @classmethod
    def unpack(cls, M: FiniteMonoid, k: int, value: int) -> "Configuration":
        return cls(M, k, unpack(value, k, M.size))

    @classmethod
    def constant(cls, M: FiniteMonoid, k: int, a: int) -> "Configuration":
        return cls(M, k, (a,) * M.size)


def pack(symbols: Iterable[int], k: int) -> int:
    value = 0
    for s in reversed(tuple(symbols)):
        value = value * k + s
    return value


def unpack(value: int, k: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        value, d = divmod(value, k)
        out.append(d)
    return tuple(out)


def all_configurations(M: FiniteMonoid, k: int) -> list[Configuration]:
    return [Configuration.unpack(M, k, v) for v in range(k ** M.size)]


def configuration_array(n: int, k: int) -> np.ndarray:
    """Every configuration as a row; row ``v`` has packed value ``v``."""
    values = np.arange(k ** n, dtype=np.int64)
    digits = np.empty((k ** n, n), dtype=np.int64)
    for i in range(n):
        values, digits[:, i] = np.divmod(values, k)
    return digits


def pack_rows(rows: np.ndarray, k: int) -> np.ndarray:
    n = rows.shape[-1]
    weights = k ** np.arange(n, dtype=np.int64)
    return rows @ weights


def configuration_set(configs: Iterable[Configuration]) -> tuple[int, ...]:
    return tuple(sorted({x.pack() for x in configs}))


@dataclass(frozen=True)
class WindowConfiguration:
    """A configuration known only on a finite window of a (built-in) monoid."""

    monoid: Any
    alphabet_size: int
    values: Mapping

    def __post_init__(self):
        vals = {self.monoid.check(m): int(s) for m, s in dict(self.values).items()}
        if any(not 0 <= s < self.alphabet_size for s in vals.values()):
            raise ValueError("symbol out of alphabet range")
        ordered = dict(sorted(vals.items(), key=lambda kv: self.monoid.sort_key(kv[0])))
        object.__setattr__(self, "values", ordered)

    @property
    def window(self) -> tuple:
        return tuple(self.values)

    def __getitem__(self, m):
        return self.values[m]

    def restrict(self, F: Iterable) -> "WindowConfiguration":
        return WindowConfiguration(self.monoid, self.alphabet_size,
                                   {m: self.values[m] for m in F})

    def agrees_with(self, other: "WindowConfiguration", F: Iterable | None = None) -> bool:
        F = self.window if F is None else F
        return all(self.values[m] == other.values[m] for m in F)

    def __eq__(self, other):
        return (isinstance(other, WindowConfiguration) and self.monoid == other.monoid
                and self.alphabet_size == other.alphabet_size
                and tuple(self.values.items()) == tuple(other.values.items()))

    def __hash__(self):
        return hash((self.alphabet_size, tuple(self.values.items())))


def all_window_configurations(M, k: int, F: Iterable) -> list[WindowConfiguration]:
    F = sorted(set(F), key=M.sort_key)
    return [WindowConfiguration(M, k, dict(zip(F, syms)))
            for syms in itertools.product(range(k), repeat=len(F))]


# ------------------------------------------------------------------ the shift

def shift(M: FiniteMonoid, m: int, x: Configuration) -> Configuration:
    """``(m x)(m') = x(m' m)``."""
    M.check(m)
    t = M.table
    return Configuration(M, x.alphabet_size, tuple(x.symbols[t[mp][m]] for mp in range(M.size)))


@dataclass(frozen=True)
class StabilizerRelation:
    """Partition of M into blocks of elements acting identically on a point."""

    monoid: FiniteMonoid
    class_of: tuple[int, ...]

    @property
    def num_classes(self) -> int:
        return max(self.class_of) + 1

    def related(self, a: int, b: int) -> bool:
        return self.class_of[a] == self.class_of[b]

    def classes(self) -> list[tuple[int, ...]]:
        blocks: dict[int, list[int]] = {}
        for i, c in enumerate(self.class_of):
            blocks.setdefault(c, []).append(i)
        return [tuple(b) for b in blocks.values()]


def orbit_and_stabilizer(M: FiniteMonoid, x: Configuration):
    """Return ``(orbit, rho_x)``; the orbit is a frozenset of configurations."""
    images = [shift(M, m, x) for m in range(M.size)]
    label: dict = {}
    class_of = tuple(label.setdefault(y, len(label)) for y in images)
    return frozenset(images), StabilizerRelation(M, class_of)


def inv_gamma(M: FiniteMonoid, gamma: Congruence, k: int) -> list[Configuration]:
    """Configurations constant on every class of ``gamma``, in packed order."""
    if gamma.monoid != M:
        raise MonoidError("congruence belongs to a different monoid")
    out = [Configuration(M, k, tuple(z[c] for c in gamma.class_of))
           for z in itertools.product(range(k), repeat=gamma.num_classes)]
    return sorted(out, key=Configuration.pack)


def inv_gamma_set(M: FiniteMonoid, gamma: Congruence, k: int) -> tuple[int, ...]:
    return configuration_set(inv_gamma(M, gamma, k))


def periodic_points(M: FiniteMonoid, k: int) -> tuple[int, ...]:
    """Packed configurations whose orbit is finite, found by orbit exploration.

    On a finite monoid this is every configuration; the exploration is kept
    so the result can be compared against the union of ``Inv(gamma)``.
    """
    out = []
    bound = k ** M.size
    for v in range(bound):
        x = Configuration.unpack(M, k, v)
        seen = {x}
        stack = [x]
        finite = True
        while stack:
            y = stack.pop()
            for m in range(M.size):
                z = shift(M, m, y)
                if z not in seen:
                    seen.add(z)
                    stack.append(z)
                    if len(seen) > bound:
                        finite = False
                        stack = []
                        break
        if finite:
            out.append(v)
    return tuple(out)


def periodic_union(M: FiniteMonoid, k: int, cap: int | None = None) -> tuple[int, ...]:
    kw = {} if cap is None else {"cap": cap}
    acc: set[int] = set()
    for g in enumerate_congruences(M, **kw):
        acc.update(inv_gamma_set(M, g, k))
    return tuple(sorted(acc))


def periodic_approximation(M, x: WindowConfiguration) -> tuple[MonoidMorphism, Configuration]:
    """Find ``phi: M -> N`` (N finite) injective on the window of ``x`` and
    ``z`` on N with ``z o phi = x`` on that window.

    For ``NatAdd`` phi is reduction mod ``1 + max(F)``.  For a free monoid on
    one letter the same cyclic quotient is used; with more letters, words
    longer than the longest window word collapse to a zero.
    """
    F = x.window
    k = x.alphabet_size
    if isinstance(M, NatAdd):
        n = 1 + max(F) if F else 1
        N = cyclic(n) if n > 1 else trivial()
        phi = MonoidMorphism(M, N, (1 % n,))
    elif isinstance(M, FreeMonoid):
        L = max((len(w) for w in F), default=0)
        if M.generators == 1:
            n = L + 1
            N = cyclic(n) if n > 1 else trivial()
            phi = MonoidMorphism(M, N, (1 % n,))
        else:
            N, words = truncated_free(M.generators, L)
            index = {w: i for i, w in enumerate(words)}
            gen_images = tuple(index[(g,)] if L >= 1 else len(words) - 1
                               for g in range(M.generators))
            phi = MonoidMorphism(M, N, gen_images)
    else:
        raise MonoidError(f"periodic approximation is not available for {M!r}")
    symbols = [0] * N.size
    used: dict[int, Any] = {}
    for m in F:
        i = phi(m)
        if i in used:
            raise AssertionError(f"quotient not injective on window: {used[i]!r}, {m!r}")
        used[i] = m
        symbols[i] = x[m]
    return phi, Configuration(N, k, symbols)


def pullback_value(phi: MonoidMorphism, z: Configuration, m) -> int:
    return z.symbols[phi(m)]


def restriction_set(configs: Iterable[Configuration], F: Iterable[int]) -> frozenset:
    F = tuple(F)
    return frozenset(tuple(x.symbols[m] for m in F) for x in configs)


def window_hb_agree(Y: Iterable[Configuration], Z: Iterable[Configuration], F: Iterable[int]) -> bool:
    """Mutual approximation of ``Y`` and ``Z`` within the window ``F``.

    Each member of either set must agree on ``F`` with some member of the
    other, i.e. the restrictions to ``F`` form the same set.
    """
    F = tuple(F)
    return restriction_set(Y, F) == restriction_set(Z, F)
