"""The verification harness: experiments turn identities and estimates into
machine-readable pass/fail reports.

Every report is deterministic given (seed, parameters) and serializes to
JSON under the norml-report/1 schema; the `norml` CLI wraps the same
functions (`norml verify all --q 3 --json out.json`).
"""

import json

from norml import (
    exp_additive_bound,
    exp_fibers,
    exp_negligible_kummer,
    exp_weil_descent_comparison,
    MultiplicativeCharacter,
    run_verify,
)

# One experiment: fiber cardinalities over F_{7^4}/F_{7^2}.
rep = exp_fibers(7, 2, 2)
print("fibers(7,2,2):", "PASS" if rep.passed else "FAIL",
      "-", rep.aggregate["cases"], "cases")

# The induced-Kummer collapse, in its exact-vanishing regime: a character
# of order 8 on F_9 kills every sum over F_3 norms.
rep = exp_negligible_kummer(3, MultiplicativeCharacter(3, 2, 1), 2, m=1)
print("negligible Kummer, vanishing regime:", rep.parameters["vanishing_regime"],
      "- max |sum| ratio:", rep.aggregate["max_ratio"])

# The additive square-root bound for x^3 - 3x over F_7, r = 2, with its
# Artin-Schreier curve identity.
rep = exp_additive_bound((0, 4, 0, 1), 7, 1, 2)
print("additive bound:", "PASS" if rep.passed else "FAIL",
      "- admissible t:", [c["t"] for c in rep.cases if c["id"].startswith("t=")])

# Norm-one counts beat the Weil-descent estimate for r >= 3.
rep = exp_weil_descent_comparison(3, 3)
for case in rep.cases:
    if case["id"].startswith("norm-one"):
        print(f"  r={case['r']}: exact {case['exact']} vs descent {case['descent_estimate']}")

# Grids of experiments run through one entry point; reports are JSON.
reports = run_verify("artin_schreier_scaling", seed=0)
print("verify artin_schreier_scaling:",
      ["PASS" if r.passed else "FAIL" for r in reports])
print("first report as JSON:", json.dumps(reports[0].to_dict(), sort_keys=True)[:120], "...")
