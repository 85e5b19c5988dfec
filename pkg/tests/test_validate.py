import numpy as np
import pytest

from dfscavity.hilbert import SystemParams
from dfscavity.validate import (
    RabiFitError,
    compare_effective_models,
    effective_difference_entries,
    extract_rabi,
    forced_rabi_fit,
)


def make_params(ratio, n_max=8):
    return SystemParams(G=1.0, delta=ratio, n_max=n_max)


class TestExtractRabi:
    def test_fit_gate_fires_on_collective_dynamics(self):
        # the exact model confines the egeg->gege transfer to ~1/9, below the
        # 0.5 fit gate; the diagnostic carries the observed maximum transfer
        with pytest.raises(RabiFitError) as excinfo:
            extract_rabi(make_params(10.0), n=0)
        err = excinfo.value
        assert err.max_transfer == pytest.approx(1 / 9, abs=2e-3)
        assert err.run.diagnostic is not None

    def test_zero_coupling_diagnostic(self):
        with pytest.raises(RabiFitError, match="G = 0"):
            extract_rabi(SystemParams(G=0.0, delta=10.0, n_max=8), n=0)

    def test_forced_fit_converges_to_collective_rate(self):
        # the fitted frequency approaches 3*Omega (the collective rate) as
        # delta/G grows; deviation from 3*Omega strictly decreases
        devs = []
        for ratio in (10.0, 20.0, 40.0):
            run = forced_rabi_fit(make_params(ratio), n=0, n_points=4001)
            devs.append(abs(run.omega_fit - 3 * run.omega_expected) / (3 * run.omega_expected))
        assert devs[0] > devs[1] > devs[2]
        assert devs[2] < 0.02

    def test_forced_fit_deviation_from_pair_rate_increases(self):
        # the deviation from the pair-exchange rate GROWS with delta/G
        # (1.73, 1.91, 1.98), approaching 2: frozen oracle behavior
        devs = []
        for ratio in (10.0, 20.0, 40.0):
            run = forced_rabi_fit(make_params(ratio), n=0, n_points=4001)
            devs.append(run.relative_deviation)
        assert devs[0] < devs[1] < devs[2]
        assert devs[2] == pytest.approx(2.0, abs=0.05)

    def test_unitarity_normalization_and_guard(self):
        run = forced_rabi_fit(make_params(20.0), n=0, n_points=2001)
        assert run.unitarity_defect < 1e-10
        assert run.normalization_defect < 1e-10
        assert run.guard_leakage < 1e-6

    def test_leakage_accounting(self):
        run = forced_rabi_fit(make_params(10.0), n=0, n_points=2001)
        # photon leakage is the |gggg, 2> admixture; exchange leakage mirrors
        # the uniform manifold spreading
        assert 0.01 < run.leakage_photon < 0.12
        assert 0.1 < run.leakage_exchange < 0.5
        assert run.leakage_pair > run.leakage_exchange  # pair leakage includes both

    def test_photon_leakage_shrinks_with_detuning(self):
        leak10 = forced_rabi_fit(make_params(10.0), n=0, n_points=2001).leakage_photon
        leak40 = forced_rabi_fit(make_params(40.0), n=0, n_points=2001).leakage_photon
        assert leak40 < leak10
        # second-order virtual-excitation scale: ~ 48 (G/delta)^2 / 6 per state
        assert leak40 < (np.sqrt(2.0) / 40.0) ** 2 * 4 * 6

    def test_fock_sector_above_guard_rejected(self):
        with pytest.raises(ValueError, match="n_max - 4"):
            extract_rabi(make_params(10.0), n=5)


class TestCompareEffectiveModels:
    def test_internal_consistency_pair_swap_vs_closed_form(self):
        comp = compare_effective_models(make_params(20.0), n=0, n_points=301)
        assert comp.internal_consistency_defect < 1e-10

    def test_derived_tracks_full_better_than_pair_swap(self):
        comp = compare_effective_models(make_params(10.0), n=0, n_points=601)
        assert comp.derived_tracks_full_better
        assert comp.max_infidelity_derived < comp.max_infidelity_pair_swap

    def test_derived_infidelity_decreases_with_detuning(self):
        inf10 = compare_effective_models(make_params(10.0), n=0, n_points=601).max_infidelity_derived
        inf40 = compare_effective_models(make_params(40.0), n=0, n_points=601).max_infidelity_derived
        assert inf40 < inf10

    def test_difference_operator_nonempty_as_recorded(self):
        # frozen oracle count: 30 nonzero entries at n=0 (24 exchange + 6 diagonal)
        entries = effective_difference_entries(make_params(10.0), n=0)
        assert len(entries) == 30
        pairs = {(e.row, e.col) for e in entries}
        assert ("egeg", "eegg") in pairs          # exchange term
        assert ("egeg", "egeg") in pairs          # diagonal (Stark) term
        assert ("egeg", "gege") not in pairs      # the double-flip term agrees

    def test_difference_entries_all_equal_omega(self):
        params = make_params(10.0)
        entries = effective_difference_entries(params, n=0)
        from dfscavity.model import effective_coupling

        omega = effective_coupling(0, params).omega
        for e in entries:
            assert e.value == pytest.approx(omega, rel=1e-12)

    def test_probabilities_conserved_along_comparison(self):
        comp = compare_effective_models(make_params(20.0), n=0, n_points=301)
        assert np.all(comp.fidelity_pair_swap_vs_full <= 1 + 1e-12)
        assert np.all(comp.fidelity_derived_vs_full <= 1 + 1e-12)
