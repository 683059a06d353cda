"""Acceptance gate: one test per stated criterion, each ending in a single
PASS/FAIL verdict line.

Criterion 5 runs the weight-ceiling study at full depth (S = 8, ambient
towers up to F_{7^16}); it takes on the order of two hours and fails
honestly: the minimal recurrence order of every admissible sequence is 4,
certification at depth 8 would need order <= 3, and the depth needed to
certify order >= 4 puts the norm fibers beyond the enumeration budget.
The verdict line carries the full diagnostics.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from norml.bounds import (
    C_bound_mult,
    kummer_profile,
    normexa1_bound,
    normexa2_bound,
    pushforward_kernel_profile,
)
from norml.characters import AdditiveCharacter, MultiplicativeCharacter
from norml.cyclotomic import CycNumber
from norml.errors import NonIntegerMultiplicity
from norml.experiments import (
    RATIONALITY_SUITE,
    exp_additive_bound,
    exp_artin_schreier_scaling,
    exp_fibers,
    exp_multiplicative_bound,
    exp_negligible_kummer,
    exp_rationality,
    exp_weight_ceiling,
)
from norml.gf import FieldRegistry
from norml.lfun import (
    classify_weights,
    fit_rational_model,
    rth_power_check,
    series_expand,
)
from norml.sums import (
    CoefficientSequence,
    SumSpec,
    brute_force_oracle,
    norm_power_sum,
)
from norml.tracefn import (
    ArtinSchreier,
    Constant,
    GroupKind,
    InducedKummer,
    Kummer,
    Product,
    Punctual,
    PushforwardKernel,
    Shift,
    Sum,
    on_torus,
)

REG = FieldRegistry()


def _verdict(n, name, ok, detail=""):
    line = f"ACCEPTANCE criterion {n:02d} [{name}]: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"\n{detail}"
    print(line)
    assert ok, line


def test_criterion_01_fiber_cardinalities():
    started = time.time()
    failures = []
    for q in (3, 5, 7):
        for m in (1, 2):
            for r in (2, 3):
                assert q ** (m * r) <= 3**12
                rep = exp_fibers(q, m, r, registry=REG)
                if not rep.passed:
                    failures.append((q, m, r))
    elapsed = time.time() - started
    _verdict(
        1,
        "fiber cardinalities",
        not failures and elapsed < 5.0,
        f"grid 3x2x2, elapsed {elapsed:.2f}s, failures {failures}",
    )


def test_criterion_02_negligible_kummer_identity():
    started = time.time()
    presets = [
        (3, MultiplicativeCharacter(3, 1, 1)),
        (3, MultiplicativeCharacter(3, 2, 1)),
        (5, MultiplicativeCharacter(5, 1, 2)),
        (5, MultiplicativeCharacter(5, 1, 1)),
    ]
    failures = []
    vanishing_seen = False
    for q, chi in presets:
        for r in (2, 3):
            rep = exp_negligible_kummer(q, chi, r, m=1, registry=REG)
            if not rep.passed:
                failures.append((q, chi.order, r))
            if rep.parameters["vanishing_regime"]:
                vanishing_seen = True
                if rep.aggregate["max_ratio"] != 0.0:
                    failures.append((q, chi.order, r, "nonzero in vanishing regime"))
    elapsed = time.time() - started
    _verdict(
        2,
        "induced-Kummer collapse",
        not failures and vanishing_seen and elapsed < 10.0,
        f"8 preset runs, vanishing regime exercised: {vanishing_seen}, "
        f"elapsed {elapsed:.2f}s, failures {failures}",
    )


def test_criterion_03_artin_schreier_scaling():
    started = time.time()
    presets = [
        (3, AdditiveCharacter(3, 1, 1), (0, 1)),
        (5, AdditiveCharacter(5, 1, 2), (0, 2)),
        (5, AdditiveCharacter(5, 1, 1), (0, 1)),
    ]
    failures = []
    for q, psi, g in presets:
        for r in (2, 3):
            rep = exp_artin_schreier_scaling(q, psi, g, r, m=1, registry=REG)
            if not rep.passed:
                failures.append((q, psi.a, r))
    elapsed = time.time() - started
    _verdict(
        3,
        "Artin-Schreier scaling",
        not failures and elapsed < 5.0,
        f"6 preset runs, elapsed {elapsed:.2f}s, failures {failures}",
    )


def test_criterion_04_rationality_and_integral_weights():
    started = time.time()
    assert len(RATIONALITY_SUITE) >= 10
    failures = []
    for expr, group, q, m, r, t in RATIONALITY_SUITE:
        rep = exp_rationality(expr, group, q, m, r, t, S=8, registry=REG)
        case = rep.cases[0]
        ok = (
            rep.passed
            and case.get("certified")
            and case.get("prediction_exact")
            and case.get("integral_weights")
        )
        if not ok:
            failures.append((expr, case.get("reason", "weights/prediction")))
    elapsed = time.time() - started
    _verdict(
        4,
        "rationality with integral weights",
        not failures and elapsed < 60.0,
        f"{len(RATIONALITY_SUITE)} expressions at S=8, elapsed {elapsed:.2f}s, "
        f"failures {failures}",
    )


def test_criterion_05_weight_ceiling_admissible_set():
    # Full-depth attempt; no time budget is stated for this criterion.  The
    # underlying degrees exceed what depth 8 can certify, so this records
    # the honest failure with complete diagnostics.
    reg = FieldRegistry(seed=0, max_order=7**16 + 1)
    rep = exp_weight_ceiling((0, 4, 0, 1), 7, 2, S=8, registry=reg)
    # the frame of the criterion must be right even when the fit cannot
    # certify: admissible set and degree constant are exact values
    assert rep.parameters["critical_values"] == [2, 5]
    assert rep.parameters["admissible"] == [1, 2, 5, 6]
    assert rep.parameters["degree_bound"] == "16"
    assert normexa1_bound(3, 2) == 16
    lines = []
    for case in rep.cases:
        if case["certified"]:
            lines.append(
                f"  t={case['t']}: certified, degree {case['total_degree']}, "
                f"max weight {case['max_weight']}"
            )
        else:
            lines.append(
                f"  t={case['t']}: terms {case['terms']}, "
                f"uncertifiable at depth 8 (minimal order >= "
                f"{case['uncertified_order'] or '?'}): {case['reason']}"
            )
    detail = "\n".join(lines)
    uncertified = [c for c in rep.cases if not c["certified"]]
    if uncertified:
        lowest = min(c["uncertified_order"] or 0 for c in uncertified)
        detail += (
            "\n  certification at depth 8 admits order <= 3 only; the "
            f"uncertified cases have minimal fitting order >= {lowest}, and "
            "the depth needed to certify (S >= 10) pushes norm fibers past "
            "the enumeration budget (7^10 + 1 > 2^26)."
        )
    _verdict(5, "weight ceiling on the admissible set", rep.passed, detail)


def test_criterion_06_skyscraper_asymmetry():
    rat = CycNumber.from_rational
    seq = CoefficientSequence(
        values=tuple(rat(v) for v in (1, 0, 1, 0, 1, 0, 1, 0)),
        q=3,
        m=1,
        r=2,
        t=1,
        fingerprint="skyscraper",
    )
    with pytest.raises(NonIntegerMultiplicity):
        fit_rational_model(seq)
    model = rth_power_check(seq, 2)
    doubled_ok = (
        len(model.poles) == 1
        and len(model.roots) == 1
        and model.poles[0].value == 1
        and model.roots[0].value == -1
        and tuple(series_expand(model, 8))
        == tuple(rat(v) for v in (2, 0, 2, 0, 2, 0, 2, 0))
    )
    _verdict(
        6,
        "skyscraper rationality asymmetry",
        doubled_ok,
        "plain fit rejected with non-integer multiplicities; doubled "
        "sequence fits (1+T)/(1-T) exactly",
    )


def test_criterion_07_additive_bound():
    started = time.time()
    rep = exp_additive_bound((0, 4, 0, 1), 7, 1, 2, registry=REG)
    ok = rep.passed
    ok = ok and rep.parameters["forbidden"] == [0, 3, 4]
    # independent brute-force count over F_49
    K = REG.field(7, 2)
    U = K.bdecode(np.arange(K.order, dtype=np.int64))
    values = K.beval_poly([0, 4, 0, 1], U)
    traces = K.babsolute_trace(values)
    counts = np.bincount(traces, minlength=7)
    for case in rep.cases:
        if case["id"] == "curve-identity":
            continue
        t = case["t"]
        ok = ok and case["count"] == int(counts[t])
        ok = ok and (case["count"] - 7) ** 2 <= 16 * 7
    elapsed = time.time() - started
    _verdict(
        7,
        "additive square-root bound",
        ok and elapsed < 5.0,
        f"counts {counts.tolist()}, admissible t checked against "
        f"|count-7|^2 <= 112, elapsed {elapsed:.2f}s",
    )


def test_criterion_08_multiplicative_bound():
    started = time.time()
    rep = exp_multiplicative_bound("count", (0, 4, 0, 1), 7, 1, 2, registry=REG)
    ok = rep.passed
    ok = ok and rep.parameters["forbidden"] == [3, 4]
    # independent brute-force count over F_49^*
    K = REG.field(7, 2)
    U = K.bdecode(np.arange(K.order, dtype=np.int64))
    values = K.beval_poly([0, 4, 0, 1], U)
    norms = K.bencode(K.bpow(values, 8))  # N(u) = u^{1+7}; residues embed as themselves
    counts = np.bincount(norms, minlength=K.order)
    for case in rep.cases:
        if not case["id"].startswith("t="):
            continue
        t = case["t"]
        ok = ok and case["count"] == int(counts[t])
        ok = ok and (case["count"] - 8) ** 2 <= 16 * 16 * 7
    elapsed = time.time() - started
    _verdict(
        8,
        "multiplicative square-root bound",
        ok and elapsed < 5.0,
        f"admissible t in {{1,2,5,6}} checked against |count-8|^2 <= 1792, "
        f"elapsed {elapsed:.2f}s",
    )


def test_criterion_09_curve_identities():
    started = time.time()
    add = exp_additive_bound((0, 4, 0, 1), 7, 1, 2, registry=REG)
    curve = next(c for c in add.cases if c["id"] == "curve-identity")
    mult = exp_multiplicative_bound(
        "count", (0, 4, 0, 1), 7, 1, 2, e_identity=2, registry=REG
    )
    superell = next(c for c in mult.cases if c["id"] == "superelliptic-identity")
    ok = (
        curve["satisfied"]
        and curve["pairs"] == curve["rhs"]
        and superell["satisfied"]
        and superell["e"] == 2
        and superell["delta"] == 3
        and superell["pairs"] == superell["rhs"]
    )
    elapsed = time.time() - started
    _verdict(
        9,
        "curve double-count identities",
        ok and elapsed < 10.0,
        f"Artin-Schreier pairs {curve['pairs']} = {curve['rhs']}, "
        f"superelliptic pairs {superell['pairs']} = {superell['rhs']} "
        f"(delta {superell['delta']}), elapsed {elapsed:.2f}s",
    )


def test_criterion_10_bound_formula_cross_checks():
    ok = True
    for d in (2, 3, 4):
        profile = pushforward_kernel_profile(d)
        for r in (1, 2, 3):
            ok = ok and normexa1_bound(d, r) == C_bound_mult(profile, r)
    for a in (2, 3, 4):
        for same in (False, True):
            profile = kummer_profile(a, same_char=same)
            for r in (1, 2, 3):
                ok = ok and normexa2_bound(a, r, same_char=same) == C_bound_mult(
                    profile, r
                )
    _verdict(
        10,
        "bound formula cross-checks",
        ok,
        "normexa1/normexa2 equal C_bound_mult on their profiles over "
        "{2,3,4} x {1,2,3}, both character branches",
    )


def _random_expr(rng, p):
    psi = AdditiveCharacter(p, 1, rng.randrange(1, p))
    chi = MultiplicativeCharacter(p, 1, rng.randrange(1, p - 1))
    deg = rng.randrange(1, 4)
    g = tuple(rng.randrange(p) for _ in range(deg)) + (rng.randrange(1, p),)
    leaves = [
        Constant(),
        ArtinSchreier(psi, g),
        Kummer(chi, g),
        PushforwardKernel(g),
        Punctual(rng.randrange(p**2), 2, Fraction(2)),
        InducedKummer(1, chi),
    ]
    pick = rng.randrange(9)
    if pick < 6:
        return leaves[pick]
    if pick == 6:
        return Shift(rng.choice(leaves))
    if pick == 7:
        return Sum((rng.choice(leaves), rng.choice(leaves)))
    return Product((rng.choice(leaves), rng.choice(leaves)))


def test_criterion_11_oracle_equivalence_100_specs():
    started = time.time()
    rng = random.Random(20260816)
    GM, A1 = GroupKind.Multiplicative, GroupKind.Additive
    done = 0
    mismatches = []
    while done < 100:
        p = rng.choice((3, 5, 7))
        m = rng.choice((1, 2))
        r = rng.choice((1, 2, 3))
        if p ** (m * r) > 1 << 22:
            continue
        expr = _random_expr(rng, p)
        kind = GM if on_torus(expr) else rng.choice((GM, A1))
        t = rng.randrange(1 if kind is GM else 0, p**m)
        spec = SumSpec(expr, kind, p, 1, m, r, t)
        fast = norm_power_sum(spec, registry=REG)
        slow = brute_force_oracle(spec, registry=REG)
        if fast != slow:
            mismatches.append(spec)
        done += 1
    elapsed = time.time() - started
    _verdict(
        11,
        "fast sums equal the scan oracle",
        not mismatches and elapsed < 60.0,
        f"100 seeded specs, elapsed {elapsed:.2f}s, mismatches {mismatches}",
    )
