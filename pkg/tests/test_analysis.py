import random

import pytest

from monoca.analysis import (CapExceeded, bicyclic_in_ca_monoid, bicyclic_nonsurjectivity_demo,
                             bicyclic_window, ca_status, marked_limit_demo,
                             no_preimage_certificate, residual_surjunctivity_pipeline,
                             restriction_counterexample_demo, rule_from_index,
                             single_coordinate_rules, surjunctivity_sweep)
from monoca.ca import (CellularAutomaton, apply, constant_ca, identity_ca, packed_images,
                       translation_ca)
from monoca.congruence import Congruence
from monoca.monoid import Bicyclic, cyclic, enumerate_monoids, map_monoid, u1
from monoca.shift import WindowConfiguration


def test_status_identity(map2):
    st = ca_status(identity_ca(map2, 2))
    assert st.injective and st.surjective and st.bijective
    assert st.collision is None and st.garden_of_eden is None


def test_status_constant(z3):
    st = ca_status(constant_ca(z3, 2, 1))
    assert not st.injective and not st.surjective and not st.bijective
    a, b = st.collision
    assert a != b and apply(constant_ca(z3, 2, 1), a) == apply(constant_ca(z3, 2, 1), b)
    assert st.garden_of_eden.symbols != (1, 1, 1)


def test_status_shift(z3):
    assert ca_status(translation_ca(z3, 2, 1)).bijective


def test_status_cap(z4):
    with pytest.raises(CapExceeded):
        ca_status(identity_ca(z4, 2), cap=15)


def test_rule_from_index_most_significant_first():
    assert rule_from_index(1, 2, 4) == (0, 0, 0, 1)
    assert rule_from_index(8, 2, 4) == (1, 0, 0, 0)
    assert rule_from_index(5, 3, 2) == (1, 2)


@pytest.mark.parametrize("M,total", [(cyclic(2), 16), (u1(), 16), (cyclic(3), 256)])
def test_sweep_examples(M, total):
    rep = surjunctivity_sweep(M, 2)
    assert rep.total_rules == total and rep.checked == total
    assert rep.violations == [] and rep.ok
    assert rep.injective == rep.bijective <= rep.surjective


def test_sweep_counts_match_ca_status(z3):
    rep = surjunctivity_sweep(z3, 2)
    inj = surj = 0
    for idx in range(256):
        st = ca_status(CellularAutomaton(z3, 2, (0, 1, 2), rule_from_index(idx, 2, 8)))
        inj += st.injective
        surj += st.surjective
    assert (rep.injective, rep.surjective) == (inj, surj)
    assert rep.bijective == 36


def test_sweep_partial_memory_and_alphabet(map2):
    rep = surjunctivity_sweep(map2, 3, [1])
    assert rep.total_rules == 27 and rep.injective == 6 and rep.ok


def test_sweep_deterministic_across_threads(z4):
    a = surjunctivity_sweep(z4, 2, threads=1, chunk=1000)
    b = surjunctivity_sweep(z4, 2, threads=4, chunk=1000)
    assert (a.injective, a.surjective, a.bijective, a.violations) == \
           (b.injective, b.surjective, b.bijective, b.violations)


def test_sweep_range_and_cap(z4):
    rep = surjunctivity_sweep(z4, 2, start=100, stop=300)
    assert rep.checked == 200 and (rep.range_start, rep.range_stop) == (100, 300)
    with pytest.raises(CapExceeded):
        surjunctivity_sweep(z4, 2, rule_cap=1000)


def test_sweep_sample_needs_seed(z4):
    with pytest.raises(ValueError):
        surjunctivity_sweep(z4, 2, sample=10)
    a = surjunctivity_sweep(z4, 2, sample=50, seed=3)
    b = surjunctivity_sweep(z4, 2, sample=50, seed=3)
    assert a.seed == 3 and a.checked == b.checked and a.injective == b.injective


def test_no_bicyclic_witness_on_z3(z3):
    assert bicyclic_in_ca_monoid(identity_ca(z3, 2)) is None
    for idx in range(256):
        tau = CellularAutomaton(z3, 2, (0, 1, 2), rule_from_index(idx, 2, 8))
        assert bicyclic_in_ca_monoid(tau) is None


def test_bicyclic_window():
    assert bicyclic_window(1) == [(0, 0), (0, 1), (1, 0)]
    assert len(bicyclic_window(3)) == 10


def test_bicyclic_demo_depth_one():
    rep = bicyclic_nonsurjectivity_demo(2, 1)
    assert rep.ok and rep.witness is not None
    y = rep.image_constraint.y
    assert y[(0, 0)] == 0 and y[(1, 1)] == 1
    assert rep.image_constraint.constrained == ((0, 0), (1, 1))


def test_bicyclic_demo_depth_two_exhaustive():
    rep = bicyclic_nonsurjectivity_demo(2, 2)
    assert rep.inverse.checked == rep.inverse.agreed == 2 ** 6
    assert rep.ok


def test_bicyclic_demo_single_symbol():
    rep = bicyclic_nonsurjectivity_demo(1, 2)
    assert rep.image_constraint is None and rep.witness is None and rep.ok


def test_bicyclic_demo_window_consistency():
    prev = None
    for d in range(1, 5):
        rep = bicyclic_nonsurjectivity_demo(2, d)
        assert rep.inverse.verified
        if prev is not None:
            assert set(prev.inverse.output_window) <= set(rep.inverse.output_window)
        prev = rep


def test_preimage_certificate_accepts_image():
    # a configuration with equal values at 1 and qp is not refuted
    B = Bicyclic()
    tau = translation_ca(B, 2, (0, 1))
    y = WindowConfiguration(B, 2, {(0, 0): 1, (1, 1): 1})
    cert = no_preimage_certificate(tau, y, [(0, 0), (1, 1)])
    assert not cert.verified and cert.input_window == ((0, 1),)


def test_restriction_demo():
    for d in range(1, 4):
        rep = restriction_counterexample_demo(2, d)
        assert rep.ok
        assert rep.restricted.memory == (1,)


def test_residual_pipeline_z4(z4):
    rep = residual_surjunctivity_pipeline(z4, 2)
    assert rep.ok and rep.rules == 16 and rep.injective_rules == 8
    assert rep.congruences == 3


def test_residual_pipeline_identity_and_constant(z4):
    rep = residual_surjunctivity_pipeline(z4, 2, [identity_ca(z4, 2)])
    assert rep.ok and rep.injective_rules == 1
    tau = constant_ca(z4, 2, 0)
    rep = residual_surjunctivity_pipeline(z4, 2, [tau])
    assert rep.ok and rep.injective_rules == 0 and rep.equality_checks == 0
    images = set(packed_images(tau).tolist())
    assert images == {0}


def test_residual_pipeline_sampled_needs_seed(z4):
    with pytest.raises(ValueError):
        residual_surjunctivity_pipeline(z4, 2, sample=5)
    rep = residual_surjunctivity_pipeline(z4, 2, sample=5, seed=1)
    assert rep.rules == 21 and rep.seed == 1 and rep.ok


def test_single_coordinate_rules_count(map2):
    assert len(single_coordinate_rules(map2, 2)) == 16


def test_marked_limit_z4(z4):
    rep = marked_limit_demo(z4, 2)
    assert rep.ok and rep.psi_injective and rep.correlation_holds
    halves = [g.class_of for g in rep.congruences].index((0, 1, 0, 1))
    row = next(r for r in rep.rows if (r.first, r.second) == (0, halves))
    assert not row.inv_equal
    # greedy growth over elements keeps 0 and 1 but not 2 (0 ~ 2 in one set only)
    assert row.hb_window == (0, 1)


def test_marked_limit_window_values(z4):
    from monoca.shift import inv_gamma, window_hb_agree
    d = inv_gamma(z4, Congruence.diagonal(z4), 2)
    h = inv_gamma(z4, Congruence(z4, (0, 1, 0, 1)), 2)
    assert window_hb_agree(d, h, [0])
    assert window_hb_agree(d, h, [0, 1])
    assert not window_hb_agree(d, h, [0, 2])


def test_marked_limit_self_rows(map2):
    rep = marked_limit_demo(map2, 2)
    for r in rep.rows:
        if r.first == r.second:
            assert r.inv_equal and r.pair_window == 16 and r.hb_window == (0, 1, 2, 3)


def test_marked_limit_single_symbol():
    for M in (cyclic(4), map_monoid(2)):
        rep = marked_limit_demo(M, 1)
        assert not rep.psi_injective and rep.ok


def test_psi_small_monoids_seeded():
    rng = random.Random(0)
    for M in rng.sample(enumerate_monoids(4), 5):
        assert marked_limit_demo(M, 2).ok
