import numpy as np
import pytest

from dfscavity.dynamics import dfs_propagate
from dfscavity.errors import (
    StaggerParams,
    fock_averaged_fidelity,
    stagger_sweep,
    staggered_fidelity,
    staggered_fidelity_closed_form,
    staggered_state,
    sweep_to_csv,
    thermal_weights,
)
from dfscavity.hilbert import StateVector

AREA_R = 3 * np.pi / 4


class TestStaggeredState:
    def test_no_lead_reduces_to_ideal_map(self):
        p = StaggerParams(t=AREA_R, t1=0.0)
        ideal = dfs_propagate(StateVector.basis_state("egeg"), AREA_R)
        np.testing.assert_allclose(staggered_state(p).amplitudes, ideal.amplitudes, atol=1e-14)

    def test_full_lead_is_pure_two_atom_evolution(self):
        t = 1.3
        p = StaggerParams(t=t, t1=t)
        psi = staggered_state(p)
        lam = p.lam
        assert psi.amplitude("egeg") == pytest.approx(np.cos(lam * t), abs=1e-14)
        assert psi.amplitude("geeg") == pytest.approx(-1j * np.sin(lam * t), abs=1e-14)
        assert psi.amplitude("gege") == 0.0

    def test_normalized_for_random_parameters(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            t = rng.uniform(0.1, 6.0)
            p = StaggerParams(t=t, t1=rng.uniform(0, t), omega=rng.uniform(0.2, 3.0))
            assert staggered_state(p).norm() == pytest.approx(1.0, abs=1e-14)

    def test_lead_exceeding_total_rejected(self):
        with pytest.raises(ValueError):
            StaggerParams(t=1.0, t1=1.5)

    def test_lambda_is_half_omega(self):
        p = StaggerParams(t=1.0, t1=0.2, omega=1.8)
        assert p.lam == pytest.approx(0.9)


class TestStaggeredFidelity:
    def test_no_lead_is_unity(self):
        assert staggered_fidelity(StaggerParams(t=AREA_R, t1=0.0)) == pytest.approx(1.0)

    def test_reference_lead_of_two_percent(self):
        p = StaggerParams(t=AREA_R, t1=0.02 * AREA_R)
        fid = staggered_fidelity(p)
        assert fid >= 0.98
        assert fid == pytest.approx(0.9986126, abs=1e-6)

    def test_ten_percent_lead_value(self):
        p = StaggerParams(t=AREA_R, t1=0.1 * AREA_R)
        expected = np.cos(0.5 * 0.1 * AREA_R) * np.cos(0.1 * AREA_R)
        assert staggered_fidelity(p) == pytest.approx(expected, abs=1e-12)
        assert staggered_fidelity(p) == pytest.approx(0.9656, abs=2e-4)

    def test_closed_form_matches_inner_product_on_random_draws(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            t = rng.uniform(0.1, 5.0)
            p = StaggerParams(t=t, t1=rng.uniform(0, t), omega=rng.uniform(0.3, 2.5))
            assert staggered_fidelity(p) == pytest.approx(
                abs(staggered_fidelity_closed_form(p)), abs=1e-12)


class TestStaggerSweep:
    def test_zero_only(self):
        rows = stagger_sweep([0.0])
        assert rows == ((0.0, 1.0, 1.0),)

    def test_single_point_consistency(self):
        rows = stagger_sweep([0.02])
        p = StaggerParams(t=AREA_R, t1=0.02 * AREA_R)
        assert rows[0][1] == pytest.approx(staggered_fidelity(p), abs=1e-15)

    def test_fifty_point_sweep_monotone_on_small_leads(self):
        fractions = np.linspace(0.0, 0.25, 50)
        rows = stagger_sweep(fractions)
        fids = [r[1] for r in rows]
        assert all(b - a <= 0.0 for a, b in zip(fids, fids[1:]))

    def test_csv_format(self):
        text = sweep_to_csv(stagger_sweep([0.0, 0.02]))
        lines = text.split("\n")
        assert lines[0] == "t1_fraction,fidelity_amplitude,fidelity_squared"
        assert lines[1] == "0,1,1"
        assert text.endswith("\n")
        assert len(lines[2].split(",")) == 3

    def test_fraction_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            stagger_sweep([1.2])


class TestThermalAveraging:
    def test_vacuum_is_perfect(self):
        assert fock_averaged_fidelity(0.0) == pytest.approx(1.0, abs=1e-12)

    def test_zero_pulse_area_is_perfect_for_any_nbar(self):
        for nbar in (0.0, 0.3, 1.5):
            assert fock_averaged_fidelity(nbar, 0.0) == pytest.approx(1.0, abs=1e-9)

    def test_monotone_degradation_example(self):
        assert fock_averaged_fidelity(0.1) > fock_averaged_fidelity(0.5)

    def test_matches_independent_sector_sum(self):
        # independent oracle: explicit geometric weights and pair-rotation overlaps
        nbar, area = 0.4, AREA_R
        expected = 0.0
        for n in range(200):
            p_n = nbar**n / (nbar + 1) ** (n + 1)
            expected += p_n * np.cos(area * (4 * n + 2) / 2 - area) ** 2
        assert fock_averaged_fidelity(nbar, area) == pytest.approx(expected, abs=1e-9)

    def test_r_pulse_closed_form(self):
        # for the default area the sector overlap is 1 for even n, 0 for odd,
        # giving F = (nbar+1)/(2 nbar+1)
        for nbar in (0.1, 0.5, 1.0, 2.0):
            assert fock_averaged_fidelity(nbar) == pytest.approx(
                (nbar + 1) / (2 * nbar + 1), abs=1e-8)

    def test_continuous_non_increasing_on_grid(self):
        grid = np.linspace(0.0, 2.0, 50)
        values = [fock_averaged_fidelity(float(nb)) for nb in grid]
        diffs = np.diff(values)
        assert np.all(diffs <= 1e-12)

    def test_weights_normalized_to_tail(self):
        w = thermal_weights(0.7)
        assert w.sum() == pytest.approx(1.0, abs=1e-9)
        assert w.sum() > 1 - 1e-9 - 1e-12

    def test_negative_nbar_rejected(self):
        with pytest.raises(ValueError):
            fock_averaged_fidelity(-0.1)
