"""Tests for the correlation measures on X-form two-qubit states."""
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from numpy.testing import assert_allclose

from diamondqc.measures import (concurrence, correlation_report,
                                mutual_information, qd_x_state, tdd_x_state,
                                von_neumann_entropy, x_state_measures)
from diamondqc.model import thermal_state
from diamondqc.params import DimerDensityMatrix, ModelParams, ThermalPoint

BELL = DimerDensityMatrix(r11=0.5, r22=0.0, r33=0.0, r44=0.5, r14=0.5, r23=0.0)
MIXED = DimerDensityMatrix(r11=0.25, r22=0.25, r33=0.25, r44=0.25,
                           r14=0.0, r23=0.0)

CAL_PARAMS = ModelParams(gamma=0.6, jz=0.3, j0=0.3, h=0.35)
CAL_TP = ThermalPoint(0.5)

# Frozen against the derivative-free searches over projective measurements
# (quantum discord) and the measured-state family (trace-distance discord).
CAL_REPORT = {
    "qd": 0.0489085849766104,
    "d1": 0.207969711944378,
    "d2": 0.0489085849766104,
    "tdd": 0.42787837103304,
    "concurrence": 0.0,
    "mutual_info": 0.214673646793932,
    "entropy_ab": 1.13349556213192,
    "entropy_a": 0.674084604462926,
}
WERNER_QD = 0.484030913041126  # p = 0.7, frozen from the projective search


def werner(p):
    return DimerDensityMatrix(
        r11=(1.0 - p) / 4.0, r22=(1.0 + p) / 4.0, r33=(1.0 + p) / 4.0,
        r44=(1.0 - p) / 4.0, r14=0.0, r23=-p / 2.0)


class TestEntropy:
    def test_pure_state(self):
        assert von_neumann_entropy(BELL) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert von_neumann_entropy(MIXED) == pytest.approx(2.0, abs=1e-12)
        assert von_neumann_entropy(np.eye(2) / 2.0) == pytest.approx(1.0)

    def test_structured_and_dense_paths_agree(self):
        s = thermal_state(CAL_PARAMS, CAL_TP)
        assert_allclose(von_neumann_entropy(s),
                        von_neumann_entropy(s.matrix()), rtol=0.0, atol=1e-12)

    def test_rejects_negative_state(self):
        with pytest.raises(ValueError, match="eigenvalue"):
            von_neumann_entropy(np.diag([1.5, -0.5]))

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError, match="trace"):
            von_neumann_entropy(np.eye(2))

    def test_rejects_non_hermitian(self):
        m = np.array([[0.5, 0.3], [0.0, 0.5]])
        with pytest.raises(ValueError, match="Hermitian"):
            von_neumann_entropy(m)

    def test_rejects_large_dimension(self):
        with pytest.raises(ValueError):
            von_neumann_entropy(np.eye(8) / 8.0)


class TestKnownStates:
    def test_bell_state(self):
        rep = correlation_report(BELL)
        assert rep.qd == pytest.approx(1.0, abs=1e-12)
        assert rep.tdd == pytest.approx(1.0, abs=1e-9)
        assert rep.concurrence == pytest.approx(1.0, abs=1e-12)
        assert rep.mutual_info == pytest.approx(2.0, abs=1e-12)
        assert rep.entropy_ab == pytest.approx(0.0, abs=1e-12)
        assert rep.entropy_a == pytest.approx(1.0, abs=1e-12)

    def test_maximally_mixed_state(self):
        rep = correlation_report(MIXED)
        assert rep.qd == pytest.approx(0.0, abs=1e-12)
        assert rep.tdd == pytest.approx(0.0, abs=1e-9)
        assert rep.concurrence == 0.0
        assert rep.mutual_info == pytest.approx(0.0, abs=1e-12)

    def test_classical_product_state(self):
        # diag(0.36, 0.24, 0.24, 0.16) = (0.6, 0.4) x (0.6, 0.4): a product
        # diagonal state inside the symmetric X family, so no correlations.
        s = DimerDensityMatrix(r11=0.36, r22=0.24, r33=0.24, r44=0.16,
                               r14=0.0, r23=0.0)
        rep = correlation_report(s)
        assert rep.qd == pytest.approx(0.0, abs=1e-12)
        assert rep.tdd == pytest.approx(0.0, abs=1e-9)
        assert rep.concurrence == 0.0
        assert rep.mutual_info == pytest.approx(0.0, abs=1e-12)

    def test_werner_state(self):
        rep = correlation_report(werner(0.7))
        # Below the p = 1/sqrt(2) threshold the closed form degenerates and
        # the trace-distance value comes from the fallback search; it must
        # equal the mixing weight exactly for this family.
        assert rep.tdd == pytest.approx(0.7, abs=1e-7)
        assert rep.concurrence == pytest.approx(0.55, abs=1e-12)
        assert rep.qd == pytest.approx(WERNER_QD, abs=1e-9)

    def test_calibration_point_frozen_report(self):
        rep = correlation_report(thermal_state(CAL_PARAMS, CAL_TP))
        for key, want in CAL_REPORT.items():
            got = getattr(rep, key)
            assert got == pytest.approx(want, abs=2e-11), key

    def test_entanglement_free_window_has_discord(self):
        rep = correlation_report(thermal_state(CAL_PARAMS, CAL_TP))
        assert rep.concurrence == 0.0
        assert rep.qd > 1e-3
        assert rep.tdd > 1e-3


class TestScalarWrappers:
    def test_qd_branches(self):
        s = thermal_state(CAL_PARAMS, CAL_TP)
        qd, d1, d2 = qd_x_state(s)
        assert qd == min(d1, d2)
        assert qd == pytest.approx(CAL_REPORT["qd"], abs=1e-12)
        assert d1 == pytest.approx(CAL_REPORT["d1"], abs=1e-12)

    def test_tdd_scalar(self):
        s = thermal_state(CAL_PARAMS, CAL_TP)
        assert tdd_x_state(s) == pytest.approx(CAL_REPORT["tdd"], abs=1e-12)

    def test_wrappers_accept_dense_matrices(self):
        s = thermal_state(CAL_PARAMS, CAL_TP)
        assert qd_x_state(s.matrix())[0] == pytest.approx(CAL_REPORT["qd"],
                                                          abs=1e-12)

    def test_concurrence_formula(self):
        assert concurrence(BELL) == pytest.approx(1.0)
        assert concurrence(MIXED) == 0.0
        # Sudden death: small anti-diagonal swallowed by the diagonal.
        dead = DimerDensityMatrix(r11=0.3, r22=0.2, r33=0.2, r44=0.3,
                                  r14=0.0, r23=0.1)
        assert concurrence(dead) == 0.0

    def test_mutual_information_extremes(self):
        assert mutual_information(BELL) == pytest.approx(2.0)
        assert mutual_information(MIXED) == pytest.approx(0.0, abs=1e-12)


class TestVectorized:
    def test_grid_matches_scalar_loop(self):
        rng = np.random.default_rng(5)
        n = 24
        states = []
        for _ in range(n):
            p = ModelParams(gamma=rng.uniform(-1.2, 1.2),
                            jz=rng.uniform(-1.0, 1.0),
                            j0=rng.uniform(-2.0, 2.0),
                            h=rng.uniform(-2.0, 2.0))
            states.append(thermal_state(p, ThermalPoint(rng.uniform(0.1, 3.0))))
        arrs = [np.array([getattr(s, f) for s in states])
                for f in ("r11", "r22", "r33", "r44", "r14", "r23")]
        grid = x_state_measures(*arrs)
        for i, s in enumerate(states):
            single = x_state_measures(s.r11, s.r22, s.r33, s.r44,
                                      s.r14, s.r23)
            for key in ("qd", "d1", "d2", "tdd", "concurrence",
                        "mutual_info", "entropy_ab", "entropy_a"):
                assert_allclose(grid[key][i], single[key], rtol=0.0,
                                atol=1e-14, err_msg=key)

    def test_fallback_disabled_yields_nan(self):
        out = x_state_measures(0.5, 0.0, 0.0, 0.5, 0.5, 0.0,
                               tdd_fallback=False)
        assert np.isnan(out["tdd"])
        out = x_state_measures(0.5, 0.0, 0.0, 0.5, 0.5, 0.0)
        assert out["tdd"] == pytest.approx(1.0, abs=1e-9)

    def test_psd_flag_and_min_eig_reported(self):
        s = thermal_state(CAL_PARAMS, CAL_TP)
        out = x_state_measures(s.r11, s.r22, s.r33, s.r44, s.r14, s.r23)
        assert out["psd_flag"]
        assert out["eig_min"] >= -1e-10


def symmetric_x_entries(draw):
    r22 = draw(st.floats(0.01, 0.45))
    split = draw(st.floats(0.05, 0.95))
    rest = 1.0 - 2.0 * r22
    assume(rest > 0.02)
    r11 = rest * split
    r44 = rest - r11
    f14 = draw(st.floats(-0.95, 0.95))
    f23 = draw(st.floats(-0.95, 0.95))
    return (r11, r22, r22, r44, f14 * np.sqrt(r11 * r44), f23 * r22)


@st.composite
def x_entries(draw):
    return symmetric_x_entries(draw)


class TestMeasureInvariants:
    @settings(max_examples=100, deadline=None)
    @given(entries=x_entries())
    def test_bounds(self, entries):
        out = x_state_measures(*entries)
        assert out["psd_flag"]
        assert out["qd"] >= 0.0
        assert -1e-12 <= out["tdd"] <= 1.0 + 1e-9
        assert 0.0 <= out["concurrence"] <= 1.0 + 1e-12
        assert out["mutual_info"] >= -1e-12
        assert -1e-12 <= out["entropy_ab"] <= 2.0 + 1e-12
        assert out["qd"] <= min(out["d1"], out["d2"]) + 1e-15

    @settings(max_examples=60, deadline=None)
    @given(entries=x_entries())
    def test_anti_diagonal_phase_irrelevant(self, entries):
        r11, r22, r33, r44, r14, r23 = entries
        out = x_state_measures(r11, r22, r33, r44, r14, r23)
        neg = x_state_measures(r11, r22, r33, r44, -r14, r23)
        for key in ("qd", "tdd", "concurrence", "mutual_info"):
            a, b = out[key], neg[key]
            if np.isnan(a) and np.isnan(b):
                continue
            assert_allclose(a, b, rtol=0.0, atol=1e-12, err_msg=key)
