"""Tests for the finite-chain and derivative-free search oracles."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from diamondqc.measures import correlation_report
from diamondqc.model import correlators, thermal_state
from diamondqc.oracle import (CQStateParam, FiniteChainSpec,
                              calibrate_conventions, cq_state,
                              enumerate_reduced_state,
                              finite_chain_correlators,
                              finite_chain_reduced_state, qd_bruteforce,
                              tdd_bruteforce, trace_norm,
                              transfer_spectrum_ratio)
from diamondqc.params import DimerDensityMatrix, ModelParams, ThermalPoint

CAL_PARAMS = ModelParams(gamma=0.6, jz=0.3, j0=0.3, h=0.35)
CAL_TP = ThermalPoint(0.5)

BELL = np.zeros((4, 4))
BELL[0, 0] = BELL[3, 3] = BELL[0, 3] = BELL[3, 0] = 0.5
MIXED = np.eye(4) / 4.0


def cal_spec(n_cells):
    return FiniteChainSpec(n_cells=n_cells, params=CAL_PARAMS, tp=CAL_TP)


class TestFiniteChain:
    def test_enumeration_matches_transfer_contraction(self):
        # Two independent routes to the same reduced state: summing every
        # bridge-spin configuration explicitly, and contracting the ring
        # through transfer-matrix powers.
        for n in (2, 3, 4):
            spec = cal_spec(n)
            a = enumerate_reduced_state(spec)
            b = finite_chain_reduced_state(spec)
            assert np.abs(a - b).max() <= 1e-12

    def test_enumeration_capped(self):
        with pytest.raises(ValueError, match="capped"):
            enumerate_reduced_state(cal_spec(13))

    def test_convergence_to_closed_form_is_monotone(self):
        closed = correlators(CAL_PARAMS, CAL_TP)
        closed_vec = np.array([closed.xx, closed.yy, closed.zz, closed.z])
        devs = []
        for n in range(4, 15, 2):
            got = finite_chain_correlators(cal_spec(n))
            got_vec = np.array([got.xx, got.yy, got.zz, got.z])
            devs.append(np.abs(closed_vec - got_vec).max())
        # Each doubling of the ring tightens the agreement until roundoff.
        for a, b in zip(devs, devs[1:]):
            assert b <= a + 1e-15
        assert devs[0] < 1e-4
        assert devs[-1] <= 1e-12

    def test_reduced_state_is_physical(self):
        rho = finite_chain_reduced_state(cal_spec(10))
        assert_allclose(np.trace(rho).real, 1.0, rtol=0.0, atol=1e-12)
        assert np.abs(rho - rho.conj().T).max() <= 1e-12
        assert np.linalg.eigvalsh(rho).min() >= -1e-12

    def test_spec_validation(self):
        with pytest.raises(ValueError, match="n_cells"):
            cal_spec(1)
        with pytest.raises(ValueError, match="n_cells"):
            cal_spec(21)
        with pytest.raises(ValueError, match="ising_magnitude"):
            FiniteChainSpec(n_cells=4, params=CAL_PARAMS, tp=CAL_TP,
                            ising_magnitude="two")
        with pytest.raises(ValueError, match="heisenberg_convention"):
            FiniteChainSpec(n_cells=4, params=CAL_PARAMS, tp=CAL_TP,
                            heisenberg_convention="dirac")

    def test_transfer_spectrum_ratio(self):
        r = transfer_spectrum_ratio(cal_spec(14))
        assert 0.0 < r <= 1.0
        # At the calibration point the subleading weight dies fast enough
        # that a 14-cell ring is converged far beyond the test tolerances.
        assert r ** 13 <= 1e-8

    def test_calibration_selects_default_conventions(self):
        cal = calibrate_conventions()
        assert cal.selected == ("one", "spin_half")
        assert cal.selected_deviation <= 1e-8
        assert len(cal.deviations) == 4
        others = [v for k, v in cal.deviations.items() if k != cal.selected]
        assert min(others) > 100.0 * cal.selected_deviation


class TestTraceNorm:
    def test_known_values(self):
        assert trace_norm(np.zeros((3, 3))) == 0.0
        assert trace_norm(np.diag([1.0, -1.0, 0.0, 0.0])) == \
            pytest.approx(2.0, abs=1e-12)
        assert trace_norm(BELL - MIXED) == pytest.approx(1.5, abs=1e-12)

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            trace_norm(np.ones((2, 3)))
        m = np.zeros((2, 2))
        m[0, 1] = 1.0
        with pytest.raises(ValueError, match="Hermitian"):
            trace_norm(m)


class TestProjectiveSearch:
    def test_bell_state(self):
        assert qd_bruteforce(BELL) == pytest.approx(1.0, abs=1e-9)

    def test_maximally_mixed(self):
        assert qd_bruteforce(MIXED) == pytest.approx(0.0, abs=1e-9)

    def test_product_state(self):
        rho = np.diag([0.36, 0.24, 0.24, 0.16])
        assert qd_bruteforce(rho) == pytest.approx(0.0, abs=1e-9)

    def test_parameter_validation(self):
        with pytest.raises(ValueError, match="n_grid"):
            qd_bruteforce(MIXED, n_grid=15)
        with pytest.raises(ValueError, match="n_refine"):
            qd_bruteforce(MIXED, n_refine=-1)
        with pytest.raises(ValueError):
            qd_bruteforce(np.eye(4))  # trace 4

    def test_refinement_monotone(self):
        # Finer grids and more refinement rounds can only lower the
        # reported minimum (the candidate set grows), up to roundoff.
        rho = thermal_state(CAL_PARAMS, CAL_TP).matrix()
        coarse = qd_bruteforce(rho, n_grid=16, n_refine=0)
        mid = qd_bruteforce(rho, n_grid=16, n_refine=3)
        fine = qd_bruteforce(rho, n_grid=16, n_refine=6)
        assert mid <= coarse + 1e-12
        assert fine <= mid + 1e-12

    def test_matches_closed_form(self):
        rep = correlation_report(thermal_state(CAL_PARAMS, CAL_TP))
        got = qd_bruteforce(thermal_state(CAL_PARAMS, CAL_TP).matrix(),
                            n_grid=24, n_refine=6)
        assert got >= rep.qd - 1e-9
        assert got == pytest.approx(rep.qd, abs=1e-4)


class TestCQStates:
    def test_cq_state_is_density_matrix(self):
        p = CQStateParam(theta=0.7, phi=1.1, p=0.3,
                         bloch0=(0.2, -0.1, 0.5), bloch1=(-0.4, 0.3, 0.1))
        chi = cq_state(p)
        assert_allclose(np.trace(chi).real, 1.0, rtol=0.0, atol=1e-14)
        assert np.abs(chi - chi.conj().T).max() <= 1e-14
        assert np.linalg.eigvalsh(chi).min() >= -1e-14

    def test_vector_roundtrip(self):
        p = CQStateParam(theta=0.7, phi=1.1, p=0.3,
                         bloch0=(0.2, -0.1, 0.5), bloch1=(-0.4, 0.3, 0.1))
        q = CQStateParam.from_vector(p.vector())
        assert_allclose(q.vector(), p.vector(), rtol=0.0, atol=1e-15)

    def test_from_vector_projects_into_feasible_set(self):
        v = np.array([0.3, 0.2, 1.7, 3.0, 0.0, 0.0, 0.0, -5.0, 0.0])
        q = CQStateParam.from_vector(v)
        assert 0.0 <= q.p <= 1.0
        assert np.linalg.norm(q.bloch0) <= 1.0 + 1e-12
        assert np.linalg.norm(q.bloch1) <= 1.0 + 1e-12


class TestMeasuredStateSearch:
    def test_bell_state(self):
        assert tdd_bruteforce(BELL) == pytest.approx(1.0, abs=1e-7)

    def test_classical_diagonal_is_fixed_point(self):
        rho = np.diag([0.4, 0.1, 0.3, 0.2])
        assert tdd_bruteforce(rho) == pytest.approx(0.0, abs=1e-9)

    def test_maximally_mixed(self):
        assert tdd_bruteforce(MIXED) == pytest.approx(0.0, abs=1e-9)

    def test_recovers_member_of_search_family(self):
        p = CQStateParam(theta=np.pi / 4.0, phi=0.0, p=0.6,
                         bloch0=(0.3, 0.0, -0.2), bloch1=(-0.1, 0.4, 0.5))
        assert tdd_bruteforce(cq_state(p)) <= 1e-8

    def test_upper_bound_on_closed_form(self):
        # The search minimizes over a subset of zero-discord states, so it
        # can only land on or above the closed-form value; with the
        # dephasing-coupled polls it lands on it.
        for t in (0.2, 0.5, 1.5):
            s = thermal_state(CAL_PARAMS, ThermalPoint(t))
            rep = correlation_report(s)
            got = tdd_bruteforce(s.matrix(), n_starts=8, seed=0)
            assert got >= rep.tdd - 1e-9
            assert got == pytest.approx(rep.tdd, abs=1e-6)

    def test_deterministic(self):
        s = thermal_state(CAL_PARAMS, CAL_TP).matrix()
        a = tdd_bruteforce(s, n_starts=8, seed=3)
        b = tdd_bruteforce(s, n_starts=8, seed=3)
        assert a == b

    def test_parameter_validation(self):
        with pytest.raises(ValueError, match="n_starts"):
            tdd_bruteforce(MIXED, n_starts=7)
        with pytest.raises(ValueError):
            tdd_bruteforce(np.eye(4))

    def test_accepts_structured_state(self):
        s = DimerDensityMatrix(r11=0.5, r22=0.0, r33=0.0, r44=0.5,
                               r14=0.5, r23=0.0)
        assert tdd_bruteforce(s) == pytest.approx(1.0, abs=1e-7)
