"""Compiling the seven-pulse CNOT and verifying its truth table.

The sequence H34, P34, R, P34, H12, H34, P34^-1 acts on two logical qubits
(|1~> = |eg>, |0~> = |ge|) with the control on atom pair (3,4) and the
target on pair (1,2). Neither the temporal reading of the list nor the sign
of the P phase is fixed a priori, so the compiler tries all four
conventions against the truth table and records the one it selects.
"""

import numpy as np

from dfscavity import (
    SystemParams,
    compile_cnot,
    convention_search,
    schedule_duration,
    sequence_unitary_logical,
    verify_truth_table,
)

print("convention search (2 temporal orders x 2 P signs):")
for conv, report in convention_search():
    worst = min(r.probability for r in report.rows)
    print(f"  order={conv.application_order:27s} sign={conv.p_sign:+d} "
          f"-> {'PASS' if report.passed else 'FAIL'} (worst prob {worst:.3f})")

seq = compile_cnot()
print()
print("selected:", seq.convention)
print("gates   :", " -> ".join(f"{g.kind}{g.target if g.target != 'all' else ''}"
                               for g in seq.gates))

report = verify_truth_table(sequence_unitary_logical(seq))
print()
print("truth table (atomic labels, pairs (12)(34); control |eg>_34 flips the target):")
for row in report.rows:
    print(f"  |{row.input_state}> -> |{row.observed}>  prob {row.probability:.12f}  "
          f"amplitude {row.phase:+.4f}")
print("all four output phases are -1: the compiled unitary is -CNOT and squares to 1.")

params = SystemParams(G=2 * np.pi * 47e3, delta=10 * 2 * np.pi * 47e3, n_max=8)
timing = schedule_duration(seq, params)
print()
print(f"aggregate CNOT duration : {timing.cnot_time_aggregate:.4e} s")
print(f"bottom-up per-gate sum  : {timing.bottom_up_total:.4e} s "
      f"(P gates booked at {timing.p_gate_duration} s)")
print(f"unreconciled difference : {timing.discrepancy:.4e} s "
      "(reported, never silently absorbed)")
print(f"CNOT time / excited-state lifetime: {timing.cnot_over_lifetime:.2e}")
