"""Monoids: finite Cayley tables and a few exact infinite built-ins.

Elements of a finite monoid are the indices ``0 .. size-1``.  The built-in
infinite monoids use their own element types:

* :class:`Bicyclic` -- :class:`BicyclicElement` ``(a, b)`` standing for ``q^a p^b``
* :class:`FreeMonoid` -- tuples of generator indices (words)
* :class:`NatAdd` -- non-negative ints under addition
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple, Sequence


class MonoidError(ValueError):
    pass


class InvalidTable(MonoidError):
    pass


class ElementError(MonoidError):
    pass


class WordTooLong(MonoidError):
    pass


def _check_table(size: int, identity: int, table: tuple[tuple[int, ...], ...]) -> None:
    if size < 1:
        raise InvalidTable("size must be positive")
    if len(table) != size or any(len(row) != size for row in table):
        raise InvalidTable(f"table must be {size}x{size}")
    for row in table:
        for v in row:
            if not 0 <= v < size:
                raise InvalidTable(f"entry {v} out of range for size {size}")
    if not 0 <= identity < size:
        raise InvalidTable(f"identity {identity} out of range")
    for i in range(size):
        if table[identity][i] != i or table[i][identity] != i:
            raise InvalidTable(f"{identity} is not a two-sided identity")
    for i in range(size):
        row_i = table[i]
        for j in range(size):
            ij = row_i[j]
            row_ij = table[ij]
            row_j = table[j]
            for k in range(size):
                if row_ij[k] != row_i[row_j[k]]:
                    raise InvalidTable(f"not associative at ({i}, {j}, {k})")


@dataclass(frozen=True)
class FiniteMonoid:
    """A finite monoid given by its Cayley table ``table[i][j] = i*j``.

    The table is validated on construction; an invalid table raises
    :class:`InvalidTable`.
    """

    size: int
    identity: int
    table: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        table = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", table)
        _check_table(self.size, self.identity, table)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]], identity: int | None = None,
                   name: str = "") -> "FiniteMonoid":
        table = tuple(tuple(int(v) for v in row) for row in table)
        size = len(table)
        if identity is None:
            found = [e for e in range(size)
                     if all(table[e][i] == i and table[i][e] == i for i in range(size))]
            if not found:
                raise InvalidTable("table has no identity element")
            identity = found[0]
        return cls(size, identity, table, name)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def contains(self, m: Any) -> bool:
        return isinstance(m, int) and 0 <= m < self.size

    def check(self, m: Any) -> int:
        if not self.contains(m):
            raise ElementError(f"element {m!r} out of range for monoid of size {self.size}")
        return m

    def elements(self) -> range:
        return range(self.size)

    def sort_key(self, m: int):
        return m

    def power(self, m: int, n: int) -> int:
        r = self.identity
        for _ in range(n):
            r = self.table[r][m]
        return r

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<FiniteMonoid{label} size={self.size} identity={self.identity}>"


class BicyclicElement(NamedTuple):
    """``q^a p^b`` in normal form."""

    a: int
    b: int

    def __str__(self) -> str:
        return f"{self.a},{self.b}"


P = BicyclicElement(0, 1)
Q = BicyclicElement(1, 0)


class Bicyclic:
    """The bicyclic monoid ``<p, q : pq = 1>`` with closed-form arithmetic."""

    name = "bicyclic"
    identity = BicyclicElement(0, 0)
    p = P
    q = Q

    def mul(self, m: BicyclicElement, n: BicyclicElement) -> BicyclicElement:
        a, b = m
        c, d = n
        if b >= c:
            return BicyclicElement(a, b - c + d)
        return BicyclicElement(a + c - b, d)

    def contains(self, m: Any) -> bool:
        return (isinstance(m, tuple) and len(m) == 2
                and all(isinstance(v, int) and v >= 0 for v in m))

    def check(self, m: Any) -> BicyclicElement:
        if not self.contains(m):
            raise ElementError(f"{m!r} is not a bicyclic element")
        return BicyclicElement(*m)

    def sort_key(self, m):
        return tuple(m)

    def power(self, m, n: int):
        r = self.identity
        for _ in range(n):
            r = self.mul(r, m)
        return r

    def __eq__(self, other):
        return isinstance(other, Bicyclic)

    def __hash__(self):
        return hash("bicyclic")

    def __repr__(self):
        return "Bicyclic()"


class FreeMonoid:
    """Free monoid on ``generators`` letters; words are tuples of letter indices.

    Products longer than ``max_length`` raise :class:`WordTooLong`.
    """

    identity: tuple = ()

    def __init__(self, generators: int, max_length: int = 32):
        if generators < 1:
            raise MonoidError("free monoid needs at least one generator")
        self.generators = generators
        self.max_length = max_length
        self.name = f"free:{generators}"

    def mul(self, u: tuple, v: tuple) -> tuple:
        w = tuple(u) + tuple(v)
        if len(w) > self.max_length:
            raise WordTooLong(f"word length {len(w)} exceeds cap {self.max_length}")
        return w

    def contains(self, m: Any) -> bool:
        return (isinstance(m, tuple) and len(m) <= self.max_length
                and all(isinstance(g, int) and 0 <= g < self.generators for g in m))

    def check(self, m: Any) -> tuple:
        if not self.contains(m):
            raise ElementError(f"{m!r} is not a word over {self.generators} generators")
        return m

    def sort_key(self, m):
        return (len(m), m)

    def power(self, m, n: int):
        return self.mul((), tuple(m) * n)

    def __eq__(self, other):
        return (isinstance(other, FreeMonoid) and other.generators == self.generators
                and other.max_length == self.max_length)

    def __hash__(self):
        return hash(("free", self.generators, self.max_length))

    def __repr__(self):
        return f"FreeMonoid({self.generators})"


class NatAdd:
    """The additive monoid of non-negative integers."""

    name = "nat-add"
    identity = 0

    def mul(self, a: int, b: int) -> int:
        return a + b

    def contains(self, m: Any) -> bool:
        return isinstance(m, int) and not isinstance(m, bool) and m >= 0

    def check(self, m: Any) -> int:
        if not self.contains(m):
            raise ElementError(f"{m!r} is not a natural number")
        return m

    def sort_key(self, m):
        return m

    def power(self, m: int, n: int) -> int:
        return m * n

    def __eq__(self, other):
        return isinstance(other, NatAdd)

    def __hash__(self):
        return hash("nat-add")

    def __repr__(self):
        return "NatAdd()"


MonoidHandle = FiniteMonoid | Bicyclic | FreeMonoid | NatAdd


def multiply(M: MonoidHandle, m, n):
    """Return ``m*n`` in ``M`` after validating both operands."""
    return M.mul(M.check(m), M.check(n))


# ---------------------------------------------------------------- factories

def cyclic(n: int) -> FiniteMonoid:
    """The cyclic group Z_n under addition."""
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteMonoid(n, 0, table, name=f"cyclic:{n}")


def trivial() -> FiniteMonoid:
    return FiniteMonoid(1, 0, ((0,),), name="trivial")


def u1() -> FiniteMonoid:
    """``{1, a}`` with ``a*a = a``."""
    return FiniteMonoid(2, 0, ((0, 1), (1, 1)), name="u1")


def flip_flop() -> FiniteMonoid:
    """``{1, a, b}`` where every non-identity product ``x*y`` equals ``y``."""
    table = ((0, 1, 2), (1, 1, 2), (2, 1, 2))
    return FiniteMonoid(3, 0, table, name="flip-flop")


def map_maps(n: int) -> list[tuple[int, ...]]:
    """Self-maps of ``{0..n-1}`` in element order: identity, other
    permutations (lex), then non-bijective maps (lex)."""
    ident = tuple(range(n))
    allmaps = list(itertools.product(range(n), repeat=n))
    perms = [f for f in allmaps if len(set(f)) == n and f != ident]
    rest = [f for f in allmaps if len(set(f)) < n]
    return [ident] + perms + rest


def map_monoid(n: int) -> FiniteMonoid:
    """The symmetric monoid Map(X), |X| = n, with product ``f*g = f o g``."""
    maps = map_maps(n)
    index = {f: i for i, f in enumerate(maps)}
    table = [[index[tuple(f[g[x]] for x in range(n))] for g in maps] for f in maps]
    return FiniteMonoid(len(maps), 0, table, name=f"map:{n}")


def truncated_free(generators: int, length: int) -> tuple[FiniteMonoid, list[tuple]]:
    """Words of length <= ``length`` plus an absorbing zero for longer words.

    Returns the monoid and its element list (the zero is the last element,
    represented by ``None``).
    """
    words: list = [()]
    for L in range(1, length + 1):
        words.extend(itertools.product(range(generators), repeat=L))
    words.append(None)
    index = {w: i for i, w in enumerate(words)}
    zero = len(words) - 1
    table = []
    for u in words:
        row = []
        for v in words:
            if u is None or v is None or len(u) + len(v) > length:
                row.append(zero)
            else:
                row.append(index[u + v])
        table.append(row)
    name = f"free:{generators}/len>{length}"
    return FiniteMonoid(len(words), 0, table, name=name), words


# ---------------------------------------------------------------- structure

def opposite(M: FiniteMonoid) -> FiniteMonoid:
    table = tuple(tuple(M.table[j][i] for j in range(M.size)) for i in range(M.size))
    name = f"op({M.name})" if M.name else ""
    return FiniteMonoid(M.size, M.identity, table, name=name)


@dataclass(frozen=True)
class ElementClass:
    left_cancellable: bool
    right_cancellable: bool
    left_invertible: bool
    right_invertible: bool

    @property
    def invertible(self) -> bool:
        return self.left_invertible and self.right_invertible


def classify_element(M: MonoidHandle, m) -> ElementClass:
    """Cancellability/invertibility of ``m``.

    ``m`` is left-cancellable when ``L_m: x -> m*x`` is injective and
    right-invertible when ``L_m`` is surjective (i.e. ``m*x = 1`` for some x);
    symmetrically for ``R_m``.
    """
    m = M.check(m)
    if isinstance(M, FiniteMonoid):
        row = M.table[m]
        col = [M.table[i][m] for i in range(M.size)]
        return ElementClass(
            left_cancellable=len(set(row)) == M.size,
            right_cancellable=len(set(col)) == M.size,
            left_invertible=M.identity in col,
            right_invertible=M.identity in row,
        )
    if isinstance(M, Bicyclic):
        a, b = m
        return ElementClass(b == 0, a == 0, b == 0, a == 0)
    unit = m == M.identity
    return ElementClass(True, True, unit, unit)


def find_bicyclic_pair(M: MonoidHandle):
    """Return ``(s, t)`` with ``s*t = 1 != t*s`` or ``None``.

    Finite monoids never have one; the search runs anyway.
    """
    if isinstance(M, Bicyclic):
        return (P, Q)
    if not isinstance(M, FiniteMonoid):
        return None
    e = M.identity
    for s in range(M.size):
        for t in range(M.size):
            if M.table[s][t] == e and M.table[t][s] != e:
                return (s, t)
    return None


def submonoid_closure(M: FiniteMonoid, S: Iterable[int]) -> frozenset[int]:
    members = {M.identity} | {M.check(s) for s in S}
    frontier = list(members)
    while frontier:
        new = []
        current = list(members)
        for a in frontier:
            for b in current:
                for c in (M.table[a][b], M.table[b][a]):
                    if c not in members:
                        members.add(c)
                        new.append(c)
        frontier = new
    return frozenset(members)


@dataclass(frozen=True)
class MonoidPredicates:
    commutative: bool
    left_cancellative: bool
    right_cancellative: bool
    is_group: bool

    @property
    def cancellative(self) -> bool:
        return self.left_cancellative and self.right_cancellative


def monoid_predicates(M: FiniteMonoid) -> MonoidPredicates:
    n = M.size
    t = M.table
    commutative = all(t[i][j] == t[j][i] for i in range(n) for j in range(i + 1, n))
    left = all(len(set(t[i])) == n for i in range(n))
    right = all(len({t[i][j] for i in range(n)}) == n for j in range(n))
    group = all(M.identity in t[i] for i in range(n))
    return MonoidPredicates(commutative, left, right, group)


def is_submonoid(M: FiniteMonoid, members: Iterable[int]) -> bool:
    members = set(members)
    if M.identity not in members:
        return False
    return all(M.table[a][b] in members for a in members for b in members)


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class MonoidMorphism:
    """A morphism into a finite monoid.

    ``images`` is the full element array for a finite source, the images of
    the generators for a free source, and ``(image of 1,)`` for ``NatAdd``.
    """

    source: Any
    target: FiniteMonoid
    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(v) for v in self.images))
        for v in self.images:
            self.target.check(v)
        src = self.source
        if isinstance(src, FiniteMonoid):
            if len(self.images) != src.size:
                raise MonoidError("finite-source morphism needs one image per element")
            t = self.target
            f = self.images
            if f[src.identity] != t.identity:
                raise MonoidError("morphism does not preserve the identity")
            for a in range(src.size):
                for b in range(src.size):
                    if f[src.table[a][b]] != t.table[f[a]][f[b]]:
                        raise MonoidError(f"morphism not multiplicative at ({a}, {b})")
        elif isinstance(src, FreeMonoid):
            if len(self.images) != src.generators:
                raise MonoidError("free-source morphism needs one image per generator")
        elif isinstance(src, NatAdd):
            if len(self.images) != 1:
                raise MonoidError("nat-add morphism is determined by the image of 1")
        else:
            raise MonoidError(f"unsupported morphism source {src!r}")

    def __call__(self, m):
        src = self.source
        t = self.target
        if isinstance(src, FiniteMonoid):
            return self.images[src.check(m)]
        if isinstance(src, FreeMonoid):
            r = t.identity
            for g in src.check(m):
                r = t.table[r][self.images[g]]
            return r
        m = src.check(m)
        # square-and-multiply; t is commutative on the image of 1
        r, base = t.identity, self.images[0]
        while m:
            if m & 1:
                r = t.table[r][base]
            base = t.table[base][base]
            m >>= 1
        return r


# ---------------------------------------------------------------- enumeration

def _assoc_ok(t, n):
    for i in range(n):
        for j in range(n):
            ij = t[i][j]
            if ij < 0:
                continue
            for k in range(n):
                jk = t[j][k]
                if jk < 0:
                    continue
                left = t[ij][k]
                right = t[i][jk]
                if left >= 0 and right >= 0 and left != right:
                    return False
    return True


def enumerate_monoid_tables(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """All associative tables on ``{0..n-1}`` with identity 0, by backtracking."""
    if n < 1:
        return []
    t = [[-1] * n for _ in range(n)]
    for i in range(n):
        t[0][i] = i
        t[i][0] = i
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    out = []

    def fill(pos):
        if pos == len(cells):
            out.append(tuple(tuple(row) for row in t))
            return
        i, j = cells[pos]
        for v in range(n):
            t[i][j] = v
            if _assoc_ok(t, n):
                fill(pos + 1)
        t[i][j] = -1

    fill(0)
    return out


def relabel(table, perm: Sequence[int]):
    """Table of the monoid transported along ``perm`` (old index -> new index)."""
    n = len(table)
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old
    return tuple(tuple(perm[table[inv[i]][inv[j]]] for j in range(n)) for i in range(n))


def enumerate_monoids(n: int, up_to_isomorphism: bool = True,
                      all_identities: bool = False) -> list[FiniteMonoid]:
    """All monoids of order ``n``.

    With ``up_to_isomorphism`` one representative (identity 0, minimal
    relabeled table) per isomorphism class.  Otherwise every labeled table
    with identity 0, or with ``all_identities`` every labeled table at all.
    """
    tables = enumerate_monoid_tables(n)
    if up_to_isomorphism:
        reps = set()
        for tab in tables:
            best = min(relabel(tab, (0,) + p) for p in itertools.permutations(range(1, n)))
            reps.add(best)
        return [FiniteMonoid(n, 0, tab) for tab in sorted(reps)]
    if not all_identities:
        return [FiniteMonoid(n, 0, tab) for tab in tables]
    out = set()
    for e in range(n):
        swap = list(range(n))
        swap[0], swap[e] = e, 0
        for tab in tables:
            out.add((e, relabel(tab, swap)))
    return [FiniteMonoid(n, e, tab) for e, tab in sorted(out)]
