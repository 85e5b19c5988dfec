"""Experiment runner: line-oriented config, named experiments, deterministic
JSON/CSV reports.

Usage:
    dfscavity <experiment> [--config PATH] [--out PATH] [--format json|csv] [--seed N]

Experiments: entangle, cnot-verify, bell, teleport, stagger-sweep, thermal,
validate-effective, durations. Exit codes: 0 all embedded PASS flags true,
1 experiment failure (report still written), 2 config error. No environment
variables are consulted; identical config + seed produce byte-identical
reports.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__
from .bell_teleport import (
    CORRECTION_TABLE,
    BellLabel,
    enumerate_bell_branches,
    prepare_bell,
    teleport,
)
from .dynamics import dfs_propagate, evolve_exact
from .errors import (
    DEFAULT_PULSE_AREA,
    StaggerParams,
    fock_averaged_fidelity,
    stagger_sweep,
    staggered_fidelity,
    staggered_fidelity_closed_form,
)
from .gates import (
    compile_cnot,
    convention_search,
    entangle_duration,
    schedule_duration,
    sequence_unitary_atomic,
    sequence_unitary_logical,
    verify_truth_table,
)
from .hilbert import StateVector, SystemParams
from .logical import LOGICAL_INDICES
from .model import build_h_eff, effective_coupling
from .validate import GUARD_LEAKAGE_MAX, RabiFitError, compare_effective_models, extract_rabi

EXPERIMENTS = (
    "entangle", "cnot-verify", "bell", "teleport",
    "stagger-sweep", "thermal", "validate-effective", "durations",
)

DEFAULT_G = 2 * np.pi * 47e3


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        loc = f" (line {line})" if line is not None else ""
        super().__init__(message + loc)
        self.line = line


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str | None = None
    G: float = DEFAULT_G
    delta: float | None = None          # default 10*G, resolved post-parse
    omega_a: float | None = None
    omega: float | None = None
    n_max: int = 8
    theta: float = np.pi / 2
    delay_T: float = np.pi
    theta_points: int = 12
    delay_points: int = 8
    delay_max: float = 2 * np.pi
    atom_splitting: float = 1.0
    t1_fraction: float = 0.02
    t1_fractions: tuple[float, ...] = tuple(np.linspace(0.0, 0.25, 50))
    pulse_area: float = DEFAULT_PULSE_AREA
    nbar: float = 0.1
    nbar_max: float = 2.0
    nbar_points: int = 50
    delta_over_G: tuple[float, ...] = (10.0, 20.0, 40.0)
    seed: int = 0
    out: str | None = None
    format: str = "json"

    def resolved_delta(self) -> float:
        return self.delta if self.delta is not None else 10.0 * self.G

    def system_params(self) -> SystemParams:
        return SystemParams(G=self.G, delta=self.resolved_delta(),
                            omega_a=self.omega_a, omega=self.omega, n_max=self.n_max)


_FLOAT_KEYS = {"G", "delta", "omega_a", "omega", "theta", "delay_T", "delay_max",
               "atom_splitting", "t1_fraction", "pulse_area", "nbar", "nbar_max"}
_INT_KEYS = {"n_max", "theta_points", "delay_points", "nbar_points", "seed"}
_LIST_KEYS = {"t1_fractions", "delta_over_G"}
_STR_KEYS = {"experiment", "out", "format"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _LIST_KEYS | _STR_KEYS


def _parse_float(key: str, raw: str, line: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: not a number: {raw!r}", line) from None
    if not np.isfinite(value):
        raise ConfigError(f"key {key!r}: value must be finite, got {raw!r}", line)
    return value


def parse_config(text: str, experiment: str | None = None) -> ExperimentConfig:
    """Parse the line-oriented `key = value` format ('#' starts a comment).

    Unknown keys, duplicate keys, and non-finite numbers are rejected with
    the offending key and line number. `experiment` supplied by the caller
    (the CLI positional) overrides the config key.
    """
    values: dict[str, object] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw_line.strip()!r}", lineno)
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        if not raw:
            raise ConfigError(f"key {key!r}: missing value", lineno)
        if key in _FLOAT_KEYS:
            values[key] = _parse_float(key, raw, lineno)
        elif key in _INT_KEYS:
            try:
                values[key] = int(raw)
            except ValueError:
                raise ConfigError(f"key {key!r}: not an integer: {raw!r}", lineno) from None
        elif key in _LIST_KEYS:
            values[key] = tuple(_parse_float(key, tok.strip(), lineno)
                                for tok in raw.split(",") if tok.strip())
        else:
            values[key] = raw
    config = ExperimentConfig(**values)
    if experiment is not None:
        config = replace(config, experiment=experiment)
    return _validate_config(config)


def _validate_config(c: ExperimentConfig) -> ExperimentConfig:
    def bad(key, msg):
        raise ConfigError(f"key {key!r}: {msg}")

    if c.experiment is None:
        raise ConfigError("missing experiment name (positional argument or 'experiment' key)")
    if c.experiment not in EXPERIMENTS:
        bad("experiment", f"unknown experiment {c.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    if not (c.G > 0):
        bad("G", f"must be > 0, got {c.G}")
    if c.delta is not None and c.delta == 0:
        bad("delta", "must be nonzero")
    if c.n_max < 4:
        bad("n_max", f"must be >= 4, got {c.n_max}")
    if c.delay_T < 0:
        bad("delay_T", "must be >= 0")
    if c.delay_max < 0:
        bad("delay_max", "must be >= 0")
    if c.theta_points < 1:
        bad("theta_points", "must be >= 1")
    if c.delay_points < 1:
        bad("delay_points", "must be >= 1")
    if not 0 <= c.t1_fraction <= 1:
        bad("t1_fraction", "must lie in [0, 1]")
    for frac in c.t1_fractions:
        if not 0 <= frac <= 1:
            bad("t1_fractions", f"entries must lie in [0, 1], got {frac}")
    if c.pulse_area < 0:
        bad("pulse_area", "must be >= 0")
    if c.nbar < 0:
        bad("nbar", "must be >= 0")
    if c.nbar_max < 0:
        bad("nbar_max", "must be >= 0")
    if c.nbar_points < 2:
        bad("nbar_points", "must be >= 2")
    for ratio in c.delta_over_G:
        if ratio <= 0:
            bad("delta_over_G", f"entries must be > 0, got {ratio}")
    if c.seed < 0:
        bad("seed", "must be >= 0")
    if c.format not in ("json", "csv"):
        bad("format", f"must be 'json' or 'csv', got {c.format!r}")
    return c


def serialize_config(c: ExperimentConfig) -> str:
    """Canonical text form; parse_config(serialize_config(c)) round-trips."""
    lines = []
    for f in fields(c):
        value = getattr(c, f.name)
        if value is None:
            continue
        if f.name in _LIST_KEYS:
            rendered = ",".join(repr(float(v)) for v in value)
        elif f.name in _FLOAT_KEYS:
            rendered = repr(float(value))
        else:
            rendered = str(value)
        lines.append(f"{f.name} = {rendered}")
    return "\n".join(lines) + "\n"


def _config_echo(c: ExperimentConfig) -> dict:
    echo = {}
    for f in fields(c):
        if f.name == "out":  # delivery path, not an input; keeps reports byte-stable
            continue
        value = getattr(c, f.name)
        if isinstance(value, tuple):
            value = [float(v) for v in value]
        echo[f.name] = value
    echo["delta_resolved"] = c.resolved_delta()
    return echo


def _c2l(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def _native(obj):
    """Recursively convert numpy scalars/arrays for JSON emission."""
    if isinstance(obj, dict):
        return {k: _native(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_native(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_native(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return _c2l(obj)
    return obj


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    experiment: str
    library_version: str
    conventions: dict
    results: dict
    flags: dict

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.flags.values())

    def to_dict(self) -> dict:
        results = {k: v for k, v in self.results.items() if k != "csv_table"}
        return _native({
            "config": self.config,
            "experiment": self.experiment,
            "library_version": self.library_version,
            "conventions": self.conventions,
            "results": results,
            "flags": self.flags,
            "passed": self.passed,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        rows = self.results.get("csv_table")
        if rows:
            header, data = rows
            lines = [",".join(header)]
            for row in data:
                lines.append(",".join(_csv_cell(v) for v in row))
            return "\n".join(lines) + "\n"
        flat = _flatten("", self.to_dict())
        lines = ["key,value"]
        for key in sorted(flat):
            lines.append(f"{key},{_csv_cell(flat[key])}")
        return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.15g}"
    text = str(value)
    if any(ch in text for ch in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _flatten(prefix: str, obj) -> dict:
    out = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(_flatten(f"{prefix}.{k}" if prefix else str(k), v))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            out.update(_flatten(f"{prefix}[{i}]", v))
    else:
        out[prefix] = obj
    return out


# ------------------------------------------------------------- experiments

def _convention_dict(seq) -> dict:
    return {
        "application_order": seq.convention.application_order,
        "p_sign": seq.convention.p_sign,
        "correction_table": {label.value: op for label, op in CORRECTION_TABLE.items()},
    }


def _run_entangle(c: ExperimentConfig) -> tuple[dict, dict, dict]:
    params = c.system_params()
    start = StateVector.basis_state("egeg")
    closed = dfs_propagate(start, np.pi / 4)
    omega0 = effective_coupling(0, params).omega
    exact = evolve_exact(build_h_eff(params, 0, include_stark=False), start,
                         (np.pi / 4) / omega0)
    defect = float(np.max(np.abs(closed.amplitudes - exact.amplitudes)))
    results = {
        "pulse_area": np.pi / 4,
        "duration_s": entangle_duration(params),
        "amplitudes": {"egeg": _c2l(closed.amplitude("egeg")),
                       "gege": _c2l(closed.amplitude("gege"))},
        "closed_vs_exponential_defect": defect,
        "norm": closed.norm(),
    }
    flags = {"closed_form_matches_exponential": defect < 1e-10,
             "normalized": abs(closed.norm() - 1) < 1e-12}
    return results, flags, {}


def _run_cnot_verify(c: ExperimentConfig) -> tuple[dict, dict, dict]:
    search = convention_search()
    seq = compile_cnot()
    u_logical = sequence_unitary_logical(seq)
    report = verify_truth_table(u_logical)
    u_atomic = sequence_unitary_atomic(seq)
    code_cols = u_atomic.matrix[:, list(LOGICAL_INDICES)]
    outside = np.delete(code_cols, list(LOGICAL_INDICES), axis=0)
    code_leak = float(np.max(np.abs(outside)))
    uu = u_logical.matrix @ u_logical.matrix
    involution_defect = float(np.max(np.abs(uu / uu[0, 0] - np.eye(4))))
    results = {
        "candidates": [
            {"application_order": conv.application_order, "p_sign": conv.p_sign,
             "passed": rep.passed,
             "worst_probability": min(r.probability for r in rep.rows)}
            for conv, rep in search
        ],
        "truth_table": [
            {"input": r.input_state, "expected": r.expected, "observed": r.observed,
             "probability": r.probability, "phase": _c2l(r.phase)}
            for r in report.rows
        ],
        "sequence_length": len(seq.gates),
        "code_space_leak": code_leak,
        "involution_defect": involution_defect,
    }
    flags = {
        "truth_table": report.passed,
        "unitary": u_logical.unitary,
        "code_space_preserved": code_leak < 1e-12,
        "squares_to_identity_up_to_phase": involution_defect < 1e-10,
    }
    return results, flags, _convention_dict(seq)


def _run_bell(c: ExperimentConfig) -> tuple[dict, dict, dict]:
    rows = []
    all_ok = True
    for label in BellLabel:
        branches = enumerate_bell_branches(prepare_bell(label))
        best = max(branches, key=lambda b: b.probability)
        ok = best.label is label and best.probability >= 1 - 1e-12
        all_ok &= ok
        rows.append({"input": label.value,
                     "observed": best.label.value if best.label else "non-Bell",
                     "outcome": "".join(best.outcomes),
                     "probability": best.probability,
                     "correct": ok})
    results = {"discrimination": rows,
               "map_pulse_area": np.pi / 4,
               "csv_table": (["input", "observed", "outcome", "probability"],
                             [[r["input"], r["observed"], r["outcome"], r["probability"]]
                              for r in rows])}
    return results, {"all_labels_correct": all_ok}, {}


def _run_teleport(c: ExperimentConfig) -> tuple[dict, dict, dict]:
    thetas = np.linspace(0.0, 2 * np.pi, c.theta_points, endpoint=False)
    delays = np.linspace(0.0, c.delay_max, c.delay_points)
    rng = np.random.default_rng(c.seed)
    dephases = rng.uniform(0.0, 2 * np.pi, size=(len(thetas), len(delays)))
    worst = 0.0
    prob_defect = 0.0
    for i, th in enumerate(thetas):
        for j, dl in enumerate(delays):
            for phi in (None, float(dephases[i, j])):
                _, rep = teleport(th, dl, "dfs", atom_splitting=c.atom_splitting,
                                  dephase_phi=phi)
                worst = max(worst, max(abs(b.fidelity - 1.0) for b in rep.branches))
                prob_defect = max(prob_defect,
                                  abs(sum(b.probability for b in rep.branches) - 1.0))
    bare_fid, _ = teleport(np.pi / 2, np.pi / c.atom_splitting, "bare",
                           atom_splitting=c.atom_splitting)
    fid_single, rep_single = teleport(c.theta, c.delay_T, "dfs",
                                      atom_splitting=c.atom_splitting, seed=c.seed)
    results = {
        "grid": {"theta_points": c.theta_points, "delay_points": c.delay_points,
                 "delay_max": c.delay_max, "atom_splitting": c.atom_splitting},
        "max_branch_deviation_from_1": worst,
        "branch_probability_defect": prob_defect,
        "bare_comparison": {"theta": np.pi / 2,
                            "splitting_times_delay": np.pi,
                            "fidelity": bare_fid},
        "single_run": {"theta": c.theta, "delay_T": c.delay_T,
                       "average_fidelity": fid_single,
                       "sampled_branch": rep_single.sampled_label,
                       "sampled_fidelity": rep_single.sampled_fidelity},
    }
    flags = {
        "dfs_delay_and_dephase_immune": worst < 1e-10,
        "branch_probabilities_sum_to_1": prob_defect < 1e-12,
        "bare_comparison_dephased_to_zero": bare_fid < 1e-12,
    }
    return results, flags, {"correction_table":
                            {label.value: op for label, op in CORRECTION_TABLE.items()}}


def _run_stagger_sweep(c: ExperimentConfig) -> tuple[dict, dict, dict]:
    rows = stagger_sweep(c.t1_fractions, pulse_area=c.pulse_area)
    t = c.pulse_area  # omega = 1 units
    closed_defect = 0.0
    for frac, amp, _sq in rows:
        p = StaggerParams(t=t, t1=frac * t)
        # the closed form is signed; the reported fidelity is its magnitude
        closed_defect = max(closed_defect, abs(amp - abs(staggered_fidelity_closed_form(p))))
    small = [r for r in rows if r[0] <= 0.25]
    diffs = np.diff([r[1] for r in small])
    monotone = bool(np.all(diffs <= 1e-12))
    p_ref = StaggerParams(t=t, t1=c.t1_fraction * t)
    f_ref = staggered_fidelity(p_ref)
    results = {
        "pulse_area": c.pulse_area,
        "reference_point": {"t1_fraction": c.t1_fraction,
                            "fidelity_amplitude": f_ref,
                            "fidelity_squared": f_ref * f_ref,
                            "closed_form": staggered_fidelity_closed_form(p_ref)},
        "bound": 0.98,
        "bound_note": ("measured amplitude fidelity exceeds the 0.98 design bound; "
                       "the bound, not equality, is the acceptance condition"),
        "closed_form_max_defect": closed_defect,
        "rows": [list(r) for r in rows],
        "csv_table": (["t1_fraction", "fidelity_amplitude", "fidelity_squared"],
                      [list(r) for r in rows]),
    }
    flags = {
        "reference_point_above_bound": f_ref >= 0.98,
        "closed_form_consistent": closed_defect < 1e-12,
        "monotone_nonincreasing": monotone,
    }
    return results, flags, {}


def _run_thermal(c: ExperimentConfig) -> tuple[dict, dict, dict]:
    grid = np.linspace(0.0, c.nbar_max, c.nbar_points)
    values = [fock_averaged_fidelity(float(nb), c.pulse_area) for nb in grid]
    diffs = np.diff(values)
    f_single = fock_averaged_fidelity(c.nbar, c.pulse_area)
    results = {
        "pulse_area": c.pulse_area,
        "nbar": c.nbar,
        "fidelity_at_nbar": f_single,
        "table": [[float(nb), float(v)] for nb, v in zip(grid, values)],
        "csv_table": (["nbar", "fidelity"],
                      [[float(nb), float(v)] for nb, v in zip(grid, values)]),
    }
    flags = {
        "fidelity_at_zero_is_one": abs(values[0] - 1.0) < 1e-12,
        "non_increasing_in_nbar": bool(np.all(diffs <= 1e-12)),
    }
    return results, flags, {}


def _run_validate_effective(c: ExperimentConfig) -> tuple[dict, dict, dict]:
    per_ratio = []
    deviations = []
    derived_infidelities = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # perturbative-ratio warnings recorded as data
        for ratio in c.delta_over_G:
            params = SystemParams(G=c.G, delta=ratio * c.G, n_max=c.n_max)
            gate_fired = False
            try:
                run = extract_rabi(params, n=0)
            except RabiFitError as err:
                run = err.run
                gate_fired = True
            comparison = compare_effective_models(params, n=0)
            deviations.append(run.relative_deviation)
            derived_infidelities.append(comparison.max_infidelity_derived)
            per_ratio.append({
                "delta_over_G": float(ratio),
                "omega_expected": run.omega_expected,
                "omega_fit": run.omega_fit,
                "relative_deviation": run.relative_deviation,
                "deviation_from_3x_expected":
                    float(abs(run.omega_fit - 3 * run.omega_expected) / (3 * run.omega_expected))
                    if np.isfinite(run.omega_fit) else None,
                "peak_population": run.peak_population,
                "fit_gate_fired": gate_fired,
                "diagnostic": run.diagnostic,
                "leakage_pair": run.leakage_pair,
                "leakage_exchange": run.leakage_exchange,
                "leakage_photon": run.leakage_photon,
                "guard_leakage": run.guard_leakage,
                "stark_shift_fit": run.stark_shift_fit,
                "unitarity_defect": run.unitarity_defect,
                "normalization_defect": run.normalization_defect,
                "perturbative_ok": run.perturbative_ok,
                "comparison": {
                    "max_infidelity_pair_swap_vs_full": comparison.max_infidelity_pair_swap,
                    "max_infidelity_derived_vs_full": comparison.max_infidelity_derived,
                    "derived_tracks_full_better": comparison.derived_tracks_full_better,
                    "internal_consistency_defect": comparison.internal_consistency_defect,
                    "difference_entries": [
                        {"row": e.row, "col": e.col, "value": _c2l(e.value)}
                        for e in comparison.difference_entries
                    ],
                    "difference_nonempty": comparison.difference_nonempty,
                },
            })
    runs = per_ratio
    dev_decreasing = all(np.isfinite(d) for d in deviations) and \
        all(b < a for a, b in zip(deviations, deviations[1:]))
    results = {
        "runs": runs,
        "recorded_difference_status": "nonempty",
        "notes": (
            "the exact model confines the egeg->gege transfer to about 1/9 because the "
            "interaction couples every two-excitation configuration to the same virtual "
            "intermediates; the fitted population frequency converges to three times the "
            "pair-exchange rate, so its deviation from that rate grows with delta/G"
        ),
        "csv_table": (
            ["delta_over_G", "omega_expected", "omega_fit", "relative_deviation",
             "peak_population", "max_infidelity_pair_swap", "max_infidelity_derived"],
            [[r["delta_over_G"], r["omega_expected"], r["omega_fit"],
              r["relative_deviation"], r["peak_population"],
              r["comparison"]["max_infidelity_pair_swap_vs_full"],
              r["comparison"]["max_infidelity_derived_vs_full"]] for r in runs],
        ),
    }
    flags = {
        "unitarity_ok": all(r["unitarity_defect"] < 1e-10 for r in runs),
        "normalization_ok": all(r["normalization_defect"] < 1e-10 for r in runs),
        "guard_levels_empty": all(r["guard_leakage"] < GUARD_LEAKAGE_MAX for r in runs),
        "difference_nonempty_as_recorded":
            all(r["comparison"]["difference_nonempty"] for r in runs),
        "derived_tracks_full_better":
            all(r["comparison"]["derived_tracks_full_better"] for r in runs),
        "derived_infidelity_decreasing":
            all(b < a for a, b in zip(derived_infidelities, derived_infidelities[1:])),
        "fit_gate_passed": all(not r["fit_gate_fired"] for r in runs),
        "pair_rabi_deviation_decreasing": bool(dev_decreasing),
    }
    return results, flags, {}


def _run_durations(c: ExperimentConfig) -> tuple[dict, dict, dict]:
    params = c.system_params()
    seq = compile_cnot()
    report = schedule_duration(seq, params)
    order = int(np.round(np.log10(report.cnot_time_aggregate)))
    results = {
        "entangle_time_s": report.entangle_time,
        "cnot_time_aggregate_s": report.cnot_time_aggregate,
        "per_gate_s": list(report.per_gate),
        "bottom_up_total_s": report.bottom_up_total,
        "aggregate_minus_bottom_up_s": report.discrepancy,
        "p_gate_duration_s": report.p_gate_duration,
        "lifetime_s": report.lifetime,
        "cnot_over_lifetime": report.cnot_over_lifetime,
        "csv_table": (["quantity", "seconds"],
                      [["entangle_time", report.entangle_time],
                       ["cnot_time_aggregate", report.cnot_time_aggregate],
                       ["bottom_up_total", report.bottom_up_total],
                       ["aggregate_minus_bottom_up", report.discrepancy]]),
    }
    flags = {
        "entangle_matches_reference": abs(report.entangle_time - 1.33e-5) <= 0.01 * 1.33e-5,
        "cnot_matches_reference": abs(report.cnot_time_aggregate - 9.31e-5) <= 0.01 * 9.31e-5,
        "order_of_magnitude_1e-4": order == -4,
        "lifetime_margin_below_1pct": report.cnot_over_lifetime < 0.01,
    }
    return results, flags, _convention_dict(seq)


_RUNNERS = {
    "entangle": _run_entangle,
    "cnot-verify": _run_cnot_verify,
    "bell": _run_bell,
    "teleport": _run_teleport,
    "stagger-sweep": _run_stagger_sweep,
    "thermal": _run_thermal,
    "validate-effective": _run_validate_effective,
    "durations": _run_durations,
}


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    if config.experiment not in _RUNNERS:
        raise ConfigError(f"unknown experiment {config.experiment!r}")
    results, flags, conventions = _RUNNERS[config.experiment](config)
    return ExperimentReport(
        config=_config_echo(config),
        experiment=config.experiment,
        library_version=__version__,
        conventions=conventions,
        results=results,
        flags=flags,
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dfscavity",
        description="Run a named experiment and emit a deterministic report.",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--out", help="report path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), help="report format")
    parser.add_argument("--seed", type=int, help="PRNG seed for sampled branches")
    args = parser.parse_args(argv)

    try:
        text = ""
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        config = parse_config(text, experiment=args.experiment)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.format is not None:
            overrides["format"] = args.format
        if args.out is not None:
            overrides["out"] = args.out
        if overrides:
            config = _validate_config(replace(config, **overrides))
    except (ConfigError, OSError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2

    started = time.monotonic()
    report = run_experiment(config)
    elapsed = time.monotonic() - started

    payload = report.to_json() if config.format == "json" else report.to_csv()
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    status = "PASS" if report.passed else "FAIL"
    print(f"{config.experiment}: {status} in {elapsed:.2f} s", file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
