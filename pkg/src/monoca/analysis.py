"""Decision procedures and experiment drivers.

Everything here is exhaustive over finite configuration spaces, or over
finite windows for the bicyclic monoid.  Caps guard the exponential loops
and raise :class:`CapExceeded` instead of running forever.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .ca import (CellularAutomaton, SubmonoidContext, apply, apply_windowed, compose,
                 identity_ca, induce, left_inverse_ca, packed_images,
                 restrict, same_map, translation_ca)
from .congruence import (DEFAULT_ENUMERATION_CAP, CapExceeded, Congruence,
                         enumerate_congruences, marked_window_agree)
from .monoid import P, Q, Bicyclic, FiniteMonoid, NatAdd
from .shift import (Configuration, WindowConfiguration, all_window_configurations,
                    configuration_array, inv_gamma, inv_gamma_set, periodic_points, periodic_union, window_hb_agree)

DEFAULT_CONFIG_CAP = 2 ** 24
DEFAULT_RULE_CAP = 2 ** 20
DEFAULT_WINDOW_CAP = 2 ** 16


# ---------------------------------------------------------------- status

@dataclass(frozen=True)
class CAStatus:
    injective: bool
    surjective: bool
    collision: tuple[Configuration, Configuration] | None = None
    garden_of_eden: Configuration | None = None

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def _config_cap(M: FiniteMonoid, k: int, cap: int) -> None:
    if k ** M.size > cap:
        raise CapExceeded(f"{k}^{M.size} configurations exceed cap {cap}")


def ca_status(tau: CellularAutomaton, cap: int = DEFAULT_CONFIG_CAP) -> CAStatus:
    """Decide injectivity and surjectivity by scanning every configuration."""
    M = tau.monoid
    k = tau.alphabet_size
    _config_cap(M, k, cap)
    images = packed_images(tau)
    total = k ** M.size
    first = np.full(total, -1, dtype=np.int64)
    collision = None
    for v, w in enumerate(images.tolist()):
        if first[w] >= 0:
            if collision is None:
                collision = (Configuration.unpack(M, k, int(first[w])),
                             Configuration.unpack(M, k, v))
        else:
            first[w] = v
    missing = np.flatnonzero(first < 0)
    goe = Configuration.unpack(M, k, int(missing[0])) if missing.size else None
    return CAStatus(collision is None, goe is None, collision, goe)


# ---------------------------------------------------------------- sweeps

def rule_from_index(index: int, k: int, length: int) -> tuple[int, ...]:
    """Rule table whose base-k digits (first entry most significant) spell ``index``."""
    out = [0] * length
    for i in range(length - 1, -1, -1):
        index, out[i] = divmod(index, k)
    return tuple(out)


def _rules_block(indices: np.ndarray, k: int, length: int) -> np.ndarray:
    out = np.empty((indices.size, length), dtype=np.int64)
    vals = indices.astype(np.int64)
    for i in range(length - 1, -1, -1):
        vals, out[:, i] = np.divmod(vals, k)
    return out


@dataclass
class SweepReport:
    monoid: str
    alphabet_size: int
    memory: tuple
    total_rules: int
    range_start: int
    range_stop: int
    injective: int = 0
    surjective: int = 0
    bijective: int = 0
    violations: list = field(default_factory=list)
    seed: int | None = None
    sampled: int | None = None
    elapsed: float = 0.0

    @property
    def checked(self) -> int:
        return self.sampled if self.sampled is not None else self.range_stop - self.range_start

    @property
    def ok(self) -> bool:
        return not self.violations


def _sweep_chunk(idx_matrix, k, length, n, indices):
    rules = _rules_block(indices, k, length)
    images = rules[:, idx_matrix]                      # (R, k^n, n)
    packed = images @ (k ** np.arange(n, dtype=np.int64))
    srt = np.sort(packed, axis=1)
    distinct = 1 + np.count_nonzero(np.diff(srt, axis=1), axis=1)
    total = k ** n
    inj = distinct == total
    present = np.zeros((packed.shape[0], total), dtype=bool)
    present[np.arange(packed.shape[0])[:, None], packed] = True
    surj = present.all(axis=1)
    viol = [int(i) for i, a, b in zip(indices, inj, surj) if a and not b]
    return int(inj.sum()), int(surj.sum()), int((inj & surj).sum()), viol


def surjunctivity_sweep(M: FiniteMonoid, k: int, memory: Sequence[int] | None = None, *,
                        rule_cap: int = DEFAULT_RULE_CAP, config_cap: int = DEFAULT_CONFIG_CAP,
                        threads: int = 1, start: int = 0, stop: int | None = None,
                        sample: int | None = None, seed: int | None = None,
                        chunk: int = 4096) -> SweepReport:
    """Classify every local rule on ``memory`` (default: all of M).

    ``sample`` draws that many rule indices with ``random.Random(seed)``
    instead of sweeping ``[start, stop)``; it requires a seed.
    """
    t0 = time.perf_counter()
    memory = tuple(range(M.size)) if memory is None else tuple(sorted(set(memory)))
    for s in memory:
        M.check(s)
    r = len(memory)
    length = k ** r
    total = k ** length
    _config_cap(M, k, config_cap)
    if sample is not None:
        if seed is None:
            raise ValueError("sampled sweeps require an explicit seed")
        rng = random.Random(seed)
        if total > 2 ** 62:
            raise CapExceeded("rule space too large for sampled indices")
        indices = np.array(sorted({rng.randrange(total) for _ in range(sample)}), dtype=np.int64)
    else:
        stop = total if stop is None else min(stop, total)
        if stop - start > rule_cap:
            raise CapExceeded(f"{stop - start} rules exceed cap {rule_cap}")
        indices = np.arange(start, stop, dtype=np.int64)
    X = configuration_array(M.size, k)
    cols = np.array([[M.table[s][m] for s in memory] for m in range(M.size)], dtype=np.int64)
    if r:
        weights = k ** np.arange(r - 1, -1, -1, dtype=np.int64)
        idx_matrix = X[:, cols] @ weights               # (k^n, n) pattern indices
    else:
        idx_matrix = np.zeros((k ** M.size, M.size), dtype=np.int64)
    chunks = [indices[i:i + chunk] for i in range(0, indices.size, chunk)]
    work = lambda c: _sweep_chunk(idx_matrix, k, length, M.size, c)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(work, chunks))
    else:
        results = [work(c) for c in chunks]
    report = SweepReport(
        monoid=M.name or f"table:{M.size}", alphabet_size=k, memory=memory,
        total_rules=total,
        range_start=0 if sample is not None else start,
        range_stop=total if sample is not None else stop,
        seed=seed, sampled=int(indices.size) if sample is not None else None)
    for inj, surj, bij, viol in results:
        report.injective += inj
        report.surjective += surj
        report.bijective += bij
        report.violations.extend(viol)
    report.violations.sort()
    report.elapsed = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------- bicyclic structure

@dataclass(frozen=True)
class BicyclicWitness:
    """``sigma o tau = Id`` but ``tau o sigma != Id``: ``tau`` and ``sigma``
    generate a copy of the bicyclic monoid inside CA(M; A)."""

    tau: CellularAutomaton
    sigma: CellularAutomaton
    equality_certificate: Any
    inequality_certificate: Any


def bicyclic_in_ca_monoid(tau: CellularAutomaton,
                          cap: int = DEFAULT_CONFIG_CAP) -> BicyclicWitness | None:
    """Witness for an injective, non-surjective ``tau`` over a finite monoid.

    Finite monoids are surjunctive, so this returns ``None`` on every input;
    it exists to certify that absence.
    """
    status = ca_status(tau, cap)
    if not status.injective or status.surjective:
        return None
    sigma = left_inverse_ca(tau)
    x = status.garden_of_eden
    back = apply(tau, apply(sigma, x))
    assert back != x
    return BicyclicWitness(tau, sigma, same_map(compose(sigma, tau), identity_ca(tau.monoid, tau.alphabet_size)),
                           (x, back))


def bicyclic_window(d: int) -> list:
    """``F_d = {q^a p^b : a + b <= d}`` in normal-form order."""
    return [Bicyclic().check((a, b)) for a in range(d + 1) for b in range(d + 1 - a)]


@dataclass
class ImageConstraintWitness:
    """A window configuration no configuration maps onto.

    ``constrained`` are elements whose image values are forced equal;
    ``input_window`` holds every input they read; all ``candidates``
    assignments of the input window were evaluated and rejected.
    """

    y: WindowConfiguration
    constrained: tuple
    input_window: tuple
    candidates: int
    rejected: int

    @property
    def verified(self) -> bool:
        return self.candidates == self.rejected and self.candidates > 0


def no_preimage_certificate(tau: CellularAutomaton, y: WindowConfiguration,
                            constrained: Sequence, cap: int = DEFAULT_WINDOW_CAP) -> ImageConstraintWitness:
    """Check that no configuration has image agreeing with ``y`` on ``constrained``.

    ``tau(x)`` on ``constrained`` depends only on ``x`` over the products
    ``s m``, so enumerating those assignments settles the question.
    """
    M = tau.monoid
    k = tau.alphabet_size
    reads = {M.mul(s, m) for m in constrained for s in tau.memory}
    window = sorted(reads | set(constrained), key=M.sort_key)
    if k ** len(window) > cap:
        raise CapExceeded(f"{k}^{len(window)} window assignments exceed cap {cap}")
    target = [y[m] for m in constrained]
    rejected = 0
    candidates = 0
    for x in all_window_configurations(M, k, window):
        candidates += 1
        out = apply_windowed(tau, x)
        if [out[m] for m in constrained] != target:
            rejected += 1
    return ImageConstraintWitness(y, tuple(constrained), tuple(sorted(reads, key=M.sort_key)),
                                  candidates, rejected)


@dataclass
class WindowInverseCertificate:
    """``sigma(tau(x))`` agrees with ``x`` on the surviving window for every
    ``x`` on the input window."""

    depth: int
    input_window: tuple
    output_window: tuple
    checked: int
    agreed: int

    @property
    def verified(self) -> bool:
        return self.checked == self.agreed and self.checked > 0 and len(self.output_window) > 0


def window_left_inverse_check(tau: CellularAutomaton, sigma: CellularAutomaton,
                              window: Sequence, cap: int = DEFAULT_WINDOW_CAP,
                              depth: int = -1) -> WindowInverseCertificate:
    M = tau.monoid
    k = tau.alphabet_size
    if k ** len(window) > cap:
        raise CapExceeded(f"{k}^{len(window)} window configurations exceed cap {cap}")
    checked = agreed = 0
    out_window: tuple = ()
    for x in all_window_configurations(M, k, window):
        z = apply_windowed(sigma, apply_windowed(tau, x))
        out_window = z.window
        checked += 1
        if z.agrees_with(x, z.window):
            agreed += 1
    return WindowInverseCertificate(depth, tuple(window), out_window, checked, agreed)


@dataclass
class BicyclicDemoReport:
    alphabet_size: int
    depth: int
    tau: CellularAutomaton
    sigma: CellularAutomaton
    inverse: WindowInverseCertificate
    image_constraint: ImageConstraintWitness | None

    @property
    def witness(self) -> BicyclicWitness | None:
        if self.image_constraint is None:
            return None
        return BicyclicWitness(self.tau, self.sigma, self.inverse, self.image_constraint)

    @property
    def ok(self) -> bool:
        ok = self.inverse.verified
        if self.alphabet_size >= 2:
            ok = ok and self.image_constraint is not None and self.image_constraint.verified
        return ok


def bicyclic_nonsurjectivity_demo(k: int, depth: int,
                                  cap: int = DEFAULT_WINDOW_CAP) -> BicyclicDemoReport:
    """Certify on windows that ``tau_p: x -> x o L_p`` over the bicyclic
    monoid is injective (``tau_q`` undoes it) but not surjective (images
    agree at ``1`` and ``qp``)."""
    if k < 1 or depth < 1:
        raise ValueError("need k >= 1 and depth >= 1")
    B = Bicyclic()
    tau = translation_ca(B, k, P)
    sigma = translation_ca(B, k, Q)
    F = bicyclic_window(depth)
    inverse = window_left_inverse_check(tau, sigma, F, cap, depth)
    constraint = None
    if k >= 2:
        qp = B.mul(Q, P)
        G = sorted(set(F) | {B.identity, qp}, key=B.sort_key)
        values = {m: 0 for m in G}
        values[qp] = 1
        y = WindowConfiguration(B, k, values)
        constraint = no_preimage_certificate(tau, y, (B.identity, qp), cap)
    return BicyclicDemoReport(k, depth, tau, sigma, inverse, constraint)


@dataclass
class RestrictionDemoReport:
    """Bicyclic ``tau_p`` versus its restriction to ``<p>`` (a shift on N)."""

    depth: int
    tau_injective: WindowInverseCertificate
    restricted: CellularAutomaton
    induced_back: bool
    restricted_surjective: tuple[int, int]
    restricted_collision: tuple[WindowConfiguration, WindowConfiguration] | None
    tau_not_surjective: ImageConstraintWitness | None

    @property
    def ok(self) -> bool:
        checked, hit = self.restricted_surjective
        return (self.tau_injective.verified and self.induced_back and checked == hit > 0
                and self.restricted_collision is not None
                and self.tau_not_surjective is not None and self.tau_not_surjective.verified)


def restriction_counterexample_demo(k: int, depth: int,
                                    cap: int = DEFAULT_WINDOW_CAP) -> RestrictionDemoReport:
    """Injective ``tau`` whose restriction is surjective but not injective,
    while ``tau`` itself is not surjective."""
    if k < 2:
        raise ValueError("the counterexample needs at least two symbols")
    base = bicyclic_nonsurjectivity_demo(k, depth, cap)
    ctx = SubmonoidContext.bicyclic_p()
    tau_N = restrict(base.tau, ctx)
    induced_back = induce(tau_N, ctx) == base.tau
    N = NatAdd()
    window = list(range(depth + 1))
    checked = hit = 0
    for y in all_window_configurations(N, k, window):
        # preimage: z(n + 1) = y(n), z(0) arbitrary
        z = WindowConfiguration(N, k, {0: 0, **{n + 1: y[n] for n in window}})
        checked += 1
        if apply_windowed(tau_N, z).restrict(window) == y:
            hit += 1
    z1 = WindowConfiguration(N, k, {n: 0 for n in window})
    z2 = WindowConfiguration(N, k, {0: 1, **{n: 0 for n in window[1:]}})
    i1, i2 = apply_windowed(tau_N, z1), apply_windowed(tau_N, z2)
    # tau_N(z)(n) reads z(1 + n) only, never z(0)
    reads_zero = any(N.mul(s, n) == 0 for s in tau_N.memory for n in range(depth + 2))
    collision = (z1, z2) if (i1 == i2 and z1 != z2 and not reads_zero) else None
    return RestrictionDemoReport(depth, base.inverse, tau_N, induced_back, (checked, hit),
                                 collision, base.image_constraint)


# ---------------------------------------------------------------- periodic pipeline

def single_coordinate_rules(M: FiniteMonoid, k: int) -> list[CellularAutomaton]:
    return [CellularAutomaton(M, k, (s,), rule)
            for s in range(M.size) for rule in itertools.product(range(k), repeat=k)]


def random_ca(M: FiniteMonoid, k: int, rng: random.Random, max_memory: int = 2) -> CellularAutomaton:
    r = rng.randint(0, min(max_memory, M.size))
    memory = rng.sample(range(M.size), r)
    rule = [rng.randrange(k) for _ in range(k ** r)]
    return CellularAutomaton(M, k, memory, rule)


@dataclass
class ResidualPipelineReport:
    monoid: str
    alphabet_size: int
    congruences: int
    rules: int
    injective_rules: int
    inclusion_checks: int
    inclusion_failures: list
    equality_checks: int
    equality_failures: list
    periodic_union_matches: bool
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return (not self.inclusion_failures and not self.equality_failures
                and self.periodic_union_matches)


def residual_surjunctivity_pipeline(M: FiniteMonoid, k: int, rules: Iterable[CellularAutomaton] | None = None,
                                    *, sample: int | None = None, seed: int | None = None,
                                    cap: int = DEFAULT_ENUMERATION_CAP,
                                    config_cap: int = DEFAULT_CONFIG_CAP) -> ResidualPipelineReport:
    """Check ``tau(Inv(g)) <= Inv(g)`` for all rules and congruences, with
    equality for injective rules, and ``Per = U Inv(g)``.

    The default family is every single-coordinate rule; ``sample`` adds
    seeded random rules.
    """
    _config_cap(M, k, config_cap)
    family = list(single_coordinate_rules(M, k)) if rules is None else list(rules)
    if sample:
        if seed is None:
            raise ValueError("sampled rule families require an explicit seed")
        rng = random.Random(seed)
        family += [random_ca(M, k, rng) for _ in range(sample)]
    congs = enumerate_congruences(M, cap)
    inv_sets = [set(inv_gamma_set(M, g, k)) for g in congs]
    inc_fail, eq_fail = [], []
    inc = eq = inj_count = 0
    for ri, tau in enumerate(family):
        images = packed_images(tau).tolist()
        injective = len(set(images)) == len(images)
        inj_count += injective
        for gi, S in enumerate(inv_sets):
            img = {images[v] for v in S}
            inc += 1
            if not img <= S:
                inc_fail.append((ri, gi))
            if injective:
                eq += 1
                if img != S:
                    eq_fail.append((ri, gi))
    matches = periodic_points(M, k) == periodic_union(M, k, cap)
    return ResidualPipelineReport(M.name or f"table:{M.size}", k, len(congs), len(family),
                                  inj_count, inc, inc_fail, eq, eq_fail, matches, seed)


# ---------------------------------------------------------------- marked limit

def _greedy_pair_window(g1: Congruence, g2: Congruence) -> list[tuple[int, int]]:
    n = g1.monoid.size
    F: list[tuple[int, int]] = []
    for pair in itertools.product(range(n), repeat=2):
        if marked_window_agree(g1, g2, F + [pair]):
            F.append(pair)
    return F


def _greedy_element_window(Y, Z, n: int) -> list[int]:
    E: list[int] = []
    for e in range(n):
        if window_hb_agree(Y, Z, E + [e]):
            E.append(e)
    return E


@dataclass
class MarkedLimitRow:
    first: int
    second: int
    pair_window: int
    inv_equal: bool
    hb_window: tuple[int, ...]


@dataclass
class MarkedLimitReport:
    monoid: str
    alphabet_size: int
    congruences: list
    rows: list
    psi_injective: bool
    correlation_holds: bool

    @property
    def ok(self) -> bool:
        if self.alphabet_size < 2:
            # injectivity needs at least two symbols; report the failure
            return self.correlation_holds
        return self.psi_injective and self.correlation_holds


def marked_limit_demo(M: FiniteMonoid, k: int, cap: int = DEFAULT_ENUMERATION_CAP) -> MarkedLimitReport:
    """Compare window agreement of congruences with window agreement of
    their invariant configuration sets.

    For ``k >= 2`` the sets ``Inv(g1)``, ``Inv(g2)`` agree on an element
    window ``E`` exactly when ``g1`` and ``g2`` agree on the pairs ``E x E``;
    this is checked for every ``E``.
    """
    congs = enumerate_congruences(M, cap)
    invs = [inv_gamma(M, g, k) for g in congs]
    inv_sets = [tuple(sorted(x.pack() for x in I)) for I in invs]
    rows = []
    correlation = True
    subsets = [E for r in range(M.size + 1) for E in itertools.combinations(range(M.size), r)]
    for i, j in itertools.combinations_with_replacement(range(len(congs)), 2):
        rows.append(MarkedLimitRow(
            i, j, len(_greedy_pair_window(congs[i], congs[j])), inv_sets[i] == inv_sets[j],
            tuple(_greedy_element_window(invs[i], invs[j], M.size))))
        if k >= 2:
            for E in subsets:
                pairs = list(itertools.product(E, repeat=2))
                if window_hb_agree(invs[i], invs[j], E) != marked_window_agree(congs[i], congs[j], pairs):
                    correlation = False
    psi_injective = len(set(inv_sets)) == len(inv_sets)
    return MarkedLimitReport(M.name or f"table:{M.size}", k, congs, rows, psi_injective, correlation)
