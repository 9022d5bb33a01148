"""Order parameters, correlators, entropies, and power-law fits."""
import math
from fractions import Fraction

import numpy as np
import pytest

from mocsim.circuit import CircuitParams, run_steady_state
from mocsim.observables import (_cspt_at, c_spt, c_zz, evaluate,
                                fit_power_law, m_b, o_spt, o_ssb,
                                order_parameter_sites, s_half, s_topo)
from mocsim.pauli import build_edge_left, build_edge_right, build_zz
from mocsim.stabilizer import StabilizerState


def cluster_steady_state(L=32, seed=1):
    state, _ = run_steady_state(CircuitParams(L=L, p_zz=0.0, alpha=3.0, seed=seed))
    return state


def ssb_steady_state(L=32, seed=2):
    state, _ = run_steady_state(CircuitParams(L=L, p_zz=1.0, alpha=6.0, seed=seed))
    return state


class TestOrderParameters:
    def test_placement(self):
        assert order_parameter_sites(32) == (8, 25)
        assert order_parameter_sites(10) == (3, 8)
        with pytest.raises(ValueError):
            order_parameter_sites(7)

    def test_plus_state_zero(self):
        st = StabilizerState.plus_state(16)
        assert o_ssb(st) == 0
        assert o_spt(st) == 0

    def test_fixed_points(self):
        cl = cluster_steady_state()
        assert o_spt(cl) == 1 and o_ssb(cl) == 0
        gz = ssb_steady_state()
        assert o_ssb(gz) == 1 and o_spt(gz) == 0

    def test_values_in_finite_sets(self):
        for seed in range(4):
            st, rec = run_steady_state(
                CircuitParams(L=16, p_zz=0.5, alpha=1.0, seed=seed, p_b=0.4,
                              protocol="edge_probe"))
            assert rec.o_ssb in (0, 1) and rec.o_spt in (0, 1)
            assert rec.m_b in (Fraction(0), Fraction(1, 2), Fraction(1))


class TestCorrelators:
    def test_plus_state_zero(self):
        st = StabilizerState.plus_state(32)
        for r in (1, 5, 16):
            assert c_zz(st, r) == 0

    def test_cluster_string_correlation_unity(self):
        st = cluster_steady_state()
        for r in (1, 4, 9):
            assert c_spt(st, r) == 1

    def test_ssb_zz_correlation_unity(self):
        st = ssb_steady_state()
        for r in (1, 4, 9, 16):
            assert c_zz(st, r) == 1

    def test_single_reference_matches_order_parameter(self):
        a, b = order_parameter_sites(32)
        for st in (cluster_steady_state(), ssb_steady_state(),
                   run_steady_state(CircuitParams(L=32, p_zz=0.5, alpha=1.0,
                                                  seed=5))[0]):
            assert _cspt_at(st, a, b - a) == o_spt(st)

    def test_r_out_of_range(self):
        st = StabilizerState.plus_state(32)
        with pytest.raises(ValueError):
            c_zz(st, 0)
        with pytest.raises(ValueError):
            c_zz(st, 17)
        with pytest.raises(ValueError):
            c_spt(st, 16)  # padding sites leave the window

    def test_values_are_rationals_in_unit_interval(self):
        st, rec = run_steady_state(
            CircuitParams(L=32, p_zz=0.4, alpha=1.0, seed=6), r_values=(1, 3, 7))
        for table in (rec.c_zz, rec.c_spt):
            for value in table.values():
                assert isinstance(value, Fraction)
                assert 0 <= value <= 1


class TestEntropies:
    def test_s_half_product_state(self):
        assert s_half(StabilizerState.plus_state(16)) == 0

    def test_s_half_bell_chain(self):
        # nearest-neighbor Bell pairs placed so exactly one straddles the cut
        st = StabilizerState.plus_state(8)
        rng = np.random.default_rng(7)
        for i in (2, 4, 6):
            st.measure(build_zz(i, i + 1, 8), rng)
        assert s_half(st) == 1

    def test_s_topo_product_and_fixed_points(self):
        assert s_topo(StabilizerState.plus_state(16)) == 0
        assert s_topo(cluster_steady_state()) == 2
        assert s_topo(ssb_steady_state()) == 0

    def test_s_topo_requires_multiple_of_four(self):
        with pytest.raises(ValueError):
            s_topo(StabilizerState.plus_state(10))

    def test_s_topo_is_integer_for_any_pure_state(self):
        from mocsim.pauli import random_hermitian_pauli
        rng = np.random.default_rng(8)
        st = StabilizerState.plus_state(8)
        for _ in range(50):
            st.measure(random_hermitian_pauli(8, rng), rng)
        assert isinstance(s_topo(st), int)


class TestEdgePolarization:
    def test_plus_state(self):
        assert m_b(StabilizerState.plus_state(8)) == 0

    def test_just_measured_edges(self):
        st = StabilizerState.plus_state(8)
        rng = np.random.default_rng(9)
        st.measure(build_edge_left(8), rng)
        st.measure(build_edge_right(8), rng)
        assert m_b(st) == 1

    def test_half_value(self):
        st = StabilizerState.plus_state(8)
        rng = np.random.default_rng(10)
        st.measure(build_edge_left(8), rng)
        assert m_b(st) == Fraction(1, 2)


class TestFitPowerLaw:
    def test_recovers_exact_generator(self):
        pts = [(r, 2.0 * r ** -0.7) for r in range(1, 21)]
        fit = fit_power_law(pts)
        assert fit.exponent == pytest.approx(0.7, abs=1e-12)
        assert fit.amplitude == pytest.approx(2.0, rel=1e-12)
        assert fit.rms_residual < 1e-12

    def test_constant_data(self):
        fit = fit_power_law([(r, 0.25) for r in range(1, 11)])
        assert fit.exponent == pytest.approx(0.0, abs=1e-12)

    def test_noisy_power_law(self):
        rng = np.random.default_rng(11)
        truth = 0.9
        pts = [(r, 1.5 * r ** -truth * math.exp(rng.normal(0, 0.05)))
               for r in range(1, 21)]
        fit = fit_power_law(pts)
        assert abs(fit.exponent - truth) < 0.05

    def test_window_and_zero_exclusion(self):
        pts = [(1, 1.0), (2, 0.5), (3, 0.0), (4, 0.25), (5, 0.2), (6, 0.0)]
        fit = fit_power_law(pts, window=(1, 5))
        assert fit.n_points == 4 and fit.n_excluded == 1

    def test_too_few_points_is_no_fit(self):
        assert fit_power_law([(1, 1.0), (2, 0.5)]) is None
        assert fit_power_law([(r, 0.0) for r in range(1, 10)]) is None


class TestNonMutation:
    def test_observables_leave_state_untouched(self):
        st, _ = run_steady_state(CircuitParams(L=16, p_zz=0.5, alpha=1.0, seed=12))
        fp = st.fingerprint()
        o_ssb(st), o_spt(st), s_half(st), s_topo(st), m_b(st)
        c_zz(st, 3), c_spt(st, 3)
        assert st.fingerprint() == fp


class TestEvaluate:
    def test_default_selection_by_protocol(self):
        params = CircuitParams(L=16, p_zz=0.2, alpha=2.0, steps=300, seed=13)
        _, rec = run_steady_state(params)
        assert rec.m_b is None and rec.s_topo is not None
        params = CircuitParams(L=16, p_zz=0.2, alpha=2.0, steps=300, seed=13,
                               p_b=0.1, protocol="edge_probe")
        _, rec = run_steady_state(params)
        assert rec.m_b is not None

    def test_unknown_name_rejected(self):
        st = StabilizerState.plus_state(16)
        params = CircuitParams(L=16, p_zz=0.2, alpha=2.0)
        with pytest.raises(ValueError):
            evaluate(st, params, observables=("bogus",))
