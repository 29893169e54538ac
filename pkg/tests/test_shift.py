import itertools

from hypothesis import given, strategies as st

from monoca.congruence import Congruence, enumerate_congruences
from monoca.monoid import FreeMonoid, NatAdd, cyclic, enumerate_monoids, map_monoid, trivial
from monoca.shift import (Configuration, WindowConfiguration, all_configurations,
                          configuration_array, inv_gamma, inv_gamma_set, orbit_and_stabilizer,
                          pack, pack_rows, periodic_approximation, periodic_points,
                          periodic_union, pullback_value, shift, unpack, window_hb_agree)

from oracles import inv_by_definition, shift_naive


def cfg(M, k, *symbols):
    return Configuration(M, k, symbols)


def test_shift_z3_rotates(z3):
    assert shift(z3, 1, cfg(z3, 3, 0, 1, 2)).symbols == (1, 2, 0)


def test_shift_by_identity_and_constants(map2):
    x = cfg(map2, 2, 1, 0, 0, 1)
    assert shift(map2, map2.identity, x) == x
    c = Configuration.constant(map2, 3, 2)
    assert all(shift(map2, m, c) == c for m in map2.elements())


def test_shift_is_action():
    for M in enumerate_monoids(3) + [map_monoid(2)]:
        for x in all_configurations(M, 2):
            for a, b in itertools.product(M.elements(), repeat=2):
                assert shift(M, a, shift(M, b, x)) == shift(M, M.mul(a, b), x)
                assert shift(M, a, x).symbols == shift_naive(M.table, a, x.symbols)


def test_orbit_constant(z4):
    orbit, rho = orbit_and_stabilizer(z4, Configuration.constant(z4, 2, 1))
    assert len(orbit) == 1 and rho.num_classes == 1


def test_orbit_examples(z3, z4):
    orbit, rho = orbit_and_stabilizer(z3, cfg(z3, 3, 0, 1, 2))
    assert len(orbit) == 3 and rho.class_of == (0, 1, 2)
    orbit, rho = orbit_and_stabilizer(z4, cfg(z4, 2, 0, 1, 0, 1))
    assert len(orbit) == 2
    assert rho.related(0, 2) and not rho.related(0, 1)


def test_orbit_size_equals_stabilizer_classes(map2):
    for x in all_configurations(map2, 2):
        orbit, rho = orbit_and_stabilizer(map2, x)
        assert len(orbit) == rho.num_classes


def test_inv_gamma_z4_halves(z4):
    got = inv_gamma(z4, Congruence(z4, (0, 1, 0, 1)), 2)
    assert [x.symbols for x in got] == [(0, 0, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1), (1, 1, 1, 1)]


def test_inv_gamma_extremes(map2):
    assert len(inv_gamma(map2, Congruence.diagonal(map2), 2)) == 16
    full = inv_gamma(map2, Congruence.full(map2), 3)
    assert [x.symbols for x in full] == [(a,) * 4 for a in range(3)]


def test_inv_gamma_matches_definition_and_counts():
    for n in range(1, 5):
        for M in enumerate_monoids(n):
            congs = enumerate_congruences(M)
            sets = {g.class_of: set(inv_gamma_set(M, g, 2)) for g in congs}
            for g in congs:
                expected = inv_by_definition(M.table, g.class_of, 2)
                assert sets[g.class_of] == {pack(x, 2) for x in expected}
                assert len(sets[g.class_of]) == 2 ** g.num_classes
            for g, h in itertools.product(congs, repeat=2):
                if g <= h:
                    assert sets[h.class_of] <= sets[g.class_of]


def test_periodic_points_finite(z4):
    assert periodic_points(z4, 2) == tuple(range(16))
    assert periodic_union(z4, 2) == tuple(range(16))


def test_pack_round_trip():
    for k in (1, 2, 3):
        for n in (1, 3, 4):
            X = configuration_array(n, k)
            assert pack_rows(X, k).tolist() == list(range(k ** n))
            for v in range(k ** n):
                assert pack(unpack(v, k, n), k) == v
                assert tuple(X[v]) == unpack(v, k, n)


def test_periodic_approximation_nat():
    N = NatAdd()
    x = WindowConfiguration(N, 2, {0: 1, 1: 0, 2: 1})
    phi, z = periodic_approximation(N, x)
    assert phi.target.table == cyclic(3).table
    assert z.symbols == (1, 0, 1)
    assert [pullback_value(phi, z, n) for n in range(7)] == [1, 0, 1, 1, 0, 1, 1]


def test_periodic_approximation_singleton_window():
    x = WindowConfiguration(NatAdd(), 2, {0: 1})
    phi, z = periodic_approximation(NatAdd(), x)
    assert phi.target == trivial() and z.symbols == (1,)


def test_periodic_approximation_free_one_letter():
    F = FreeMonoid(1)
    x = WindowConfiguration(F, 2, {(): 0, (0,): 1, (0, 0): 1})
    phi, z = periodic_approximation(F, x)
    assert phi.target.size == 3
    assert all(pullback_value(phi, z, w) == x[w] for w in x.window)


@given(st.dictionaries(st.lists(st.integers(0, 1), max_size=3).map(tuple), st.integers(0, 2),
                       min_size=1, max_size=8))
def test_periodic_approximation_free_two_letters(values):
    F = FreeMonoid(2)
    x = WindowConfiguration(F, 3, values)
    phi, z = periodic_approximation(F, x)
    assert all(pullback_value(phi, z, w) == s for w, s in values.items())
    assert len({phi(w) for w in values}) == len(values)


@given(st.lists(st.integers(0, 2), min_size=1, max_size=9))
def test_periodic_approximation_nat_property(symbols):
    x = WindowConfiguration(NatAdd(), 3, dict(enumerate(symbols)))
    phi, z = periodic_approximation(NatAdd(), x)
    n = phi.target.size
    assert n == len(symbols)
    # the pullback is n-periodic and agrees with x on the window
    for m in range(3 * n):
        assert pullback_value(phi, z, m) == pullback_value(phi, z, m + n)
    assert [pullback_value(phi, z, m) for m in range(n)] == symbols


def test_window_hb_examples(z4):
    consts = inv_gamma(z4, Congruence.full(z4), 2)
    every = inv_gamma(z4, Congruence.diagonal(z4), 2)
    assert window_hb_agree(consts, every, [0])
    assert not window_hb_agree(consts, every, [0, 1])
    for F in ([], [0], [0, 1, 2, 3]):
        assert window_hb_agree(every, every, F)


def test_window_hb_monotone(map2):
    congs = enumerate_congruences(map2)
    invs = [inv_gamma(map2, g, 2) for g in congs]
    subsets = [E for r in range(5) for E in itertools.combinations(range(4), r)]
    for Y, Z in itertools.product(invs, repeat=2):
        for E, E2 in itertools.product(subsets, repeat=2):
            if set(E) <= set(E2) and window_hb_agree(Y, Z, E2):
                assert window_hb_agree(Y, Z, E)


def test_window_configuration_is_canonical():
    N = NatAdd()
    a = WindowConfiguration(N, 2, {2: 1, 0: 0})
    b = WindowConfiguration(N, 2, {0: 0, 2: 1})
    assert a == b and hash(a) == hash(b) and a.window == (0, 2)
