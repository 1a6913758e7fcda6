"""
Cross-checking the closed forms against the master equation
===========================================================

Integrates the master equation with RK4 in a 13 x 13 two-mode Fock space
and compares it element by element with the analytic damped states.
"""
from tmsv_decoherence import run_verify

print(run_verify("phase", 0.5, 0.3, m=12).render())
for d in (0.1, 0.5, 1.0):
    report = run_verify("amplitude", 0.3, d, 0.1, m=12)
    print(f"amplitude d={d}: deviation {report.max_deviation:.2e}, "
          f"trace drift {report.trace_drift:.1e}, {'PASS' if report.passed else 'FAIL'}")
