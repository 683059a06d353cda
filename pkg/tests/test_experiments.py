"""Experiment-layer checks: identities hold on their preset grids, failures
are diagnosed honestly, and reports are deterministic JSON."""

import json

import pytest

from norml.characters import AdditiveCharacter, MultiplicativeCharacter
from norml.experiments import (
    RATIONALITY_SUITE,
    exp_additive_bound,
    exp_artin_schreier_scaling,
    exp_fibers,
    exp_multiplicative_bound,
    exp_negligible_kummer,
    exp_rationality,
    exp_weight_ceiling,
    exp_weil_descent_comparison,
    run_verify,
    split_prime_power,
)
from norml.gf import FieldRegistry

REG = FieldRegistry()


def _stripped(report):
    d = report.to_dict()
    d.pop("runtime")
    return d


def test_split_prime_power():
    assert split_prime_power(7) == (7, 1)
    assert split_prime_power(9) == (3, 2)
    assert split_prime_power(32) == (2, 5)
    with pytest.raises(ValueError):
        split_prime_power(6)
    with pytest.raises(ValueError):
        split_prime_power(1)


def test_fibers_small():
    rep = exp_fibers(3, 1, 2, registry=REG)
    assert rep.passed
    assert rep.aggregate == {"cases": 3, "failures": []}
    zero = next(c for c in rep.cases if c["t"] == 0)
    assert zero["trace_fiber"] == 3 and "norm_fiber" not in zero
    one = next(c for c in rep.cases if c["t"] == 1)
    assert one["norm_fiber"] == 4


def test_fibers_extension():
    rep = exp_fibers(7, 2, 3, registry=REG)
    assert rep.passed
    assert rep.aggregate["cases"] == 49
    norm = (7**6 - 1) // (7**2 - 1)
    assert all(c.get("norm_fiber", norm) == norm for c in rep.cases)


def test_negligible_kummer_vanishing_regime():
    # order 8 divides 3^2 - 1 but not 3 - 1: both sides vanish identically
    chi = MultiplicativeCharacter(3, 2, 1)
    rep = exp_negligible_kummer(3, chi, 2, m=1, registry=REG)
    assert rep.passed
    assert rep.parameters["vanishing_regime"] is True
    assert rep.aggregate["max_ratio"] == 0.0
    for case in rep.cases:
        assert case["lhs"]["approx"] == [0.0, 0.0]


def test_negligible_kummer_nonvanishing():
    chi = MultiplicativeCharacter(5, 1, 2)
    rep = exp_negligible_kummer(5, chi, 3, m=1, registry=REG)
    assert rep.passed
    assert rep.parameters["vanishing_regime"] is False
    assert any(case["lhs"]["approx"] != [0.0, 0.0] for case in rep.cases)


def test_artin_schreier_scaling_all_t():
    psi = AdditiveCharacter(5, 1, 2)
    rep = exp_artin_schreier_scaling(5, psi, (0, 2), 3, m=1, registry=REG)
    assert rep.passed
    assert rep.aggregate["cases"] == 5


def test_artin_schreier_scaling_rejects_nonlinear():
    psi = AdditiveCharacter(3, 1, 1)
    with pytest.raises(ValueError):
        exp_artin_schreier_scaling(3, psi, (0, 1, 1), 2, registry=REG)


def test_rationality_suite_certifies():
    assert len(RATIONALITY_SUITE) >= 10
    for expr, group, q, m, r, t in RATIONALITY_SUITE:
        rep = exp_rationality(expr, group, q, m, r, t, S=8, registry=REG)
        case = rep.cases[0]
        assert rep.passed, (expr, case.get("reason"))
        assert case["certified"] and case["prediction_exact"]
        assert case["integral_weights"]


def test_rationality_degree_bound_parameter():
    rep = exp_rationality("(const)", "gm", 3, 1, 2, 1, S=8, bound=1, registry=REG)
    assert not rep.passed
    assert rep.cases[0]["total_degree"] == 2


def test_weight_ceiling_is_honest_at_shallow_depth():
    # depth 4 cannot certify this family; the report must say so case by
    # case and carry the exact sequence prefixes
    rep = exp_weight_ceiling((0, 4, 0, 1), 7, 2, S=4, registry=REG)
    assert not rep.passed
    assert rep.parameters["critical_values"] == [2, 5]
    assert rep.parameters["admissible"] == [1, 2, 5, 6]
    terms = {c["t"]: c["terms"] for c in rep.cases}
    assert terms == {
        1: [2, 6, -88, -50],
        2: [8, 12, -16, -188],
        5: [-4, -12, 92, 4],
        6: [-4, 12, 20, -188],
    }
    for case in rep.cases:
        assert case["certified"] is False
        assert case["uncertified_order"] == 2
    assert rep.aggregate["failures"] == ["t=1", "t=2", "t=5", "t=6"]


def test_additive_bound_preset():
    rep = exp_additive_bound((0, 4, 0, 1), 7, 1, 2, registry=REG)
    assert rep.passed
    assert rep.parameters["forbidden"] == [0, 3, 4]
    assert rep.parameters["bound"] == 4
    t_cases = [c for c in rep.cases if c["id"] != "curve-identity"]
    assert sorted(c["t"] for c in t_cases) == [1, 2, 5, 6]
    for case in t_cases:
        assert case["main_term"] == 7
        assert case["deviation_sq"] <= case["bound_sq"] == 16 * 7
    curve = next(c for c in rep.cases if c["id"] == "curve-identity")
    assert curve["satisfied"] and curve["pairs"] == curve["rhs"]


def test_multiplicative_bound_count_preset():
    rep = exp_multiplicative_bound(
        "count", (0, 4, 0, 1), 7, 1, 2, e_identity=2, registry=REG
    )
    assert rep.passed
    assert rep.parameters["forbidden"] == [3, 4]
    assert rep.parameters["bound"] == "16"
    t_cases = [c for c in rep.cases if c["id"].startswith("t=")]
    assert sorted(c["t"] for c in t_cases) == [1, 2, 5, 6]
    for case in t_cases:
        assert case["main_term"] == 8
        assert int(case["deviation_sq"]) <= 16 * 16 * 7
    ident = next(c for c in rep.cases if c["id"] == "superelliptic-identity")
    assert ident["satisfied"]
    assert ident["delta"] == 3
    assert ident["pairs"] == ident["rhs"]


def test_multiplicative_bound_charsum_branches():
    same = exp_multiplicative_bound(
        "charsum", (2, 4, 1), 7, 1, 2,
        chi=MultiplicativeCharacter(7, 1, 3), registry=REG,
    )
    assert same.passed
    assert same.parameters["branch"] == "same"
    assert same.parameters["a"] == 2
    distinct = exp_multiplicative_bound(
        "charsum", (0, 2, 4, 1), 7, 1, 2,
        chi=MultiplicativeCharacter(7, 1, 2), registry=REG,
    )
    assert distinct.passed
    assert distinct.parameters["branch"] == "distinct"
    assert distinct.parameters["roots"] == [1, 2]


def test_multiplicative_bound_rejects_unknown_mode():
    with pytest.raises(ValueError):
        exp_multiplicative_bound("other", (0, 1), 3, 1, 2, registry=REG)


def test_weil_descent_comparison():
    rep = exp_weil_descent_comparison(3, 3, registry=REG)
    assert rep.passed
    norm_cases = [c for c in rep.cases if c["id"].startswith("norm-one")]
    assert [(c["r"], c["exact"], c["series"], c["descent_estimate"]) for c in norm_cases] == [
        (2, 4, 4, 4),
        (3, 13, 13, 16),
    ]
    table = {(row["d"], row["r"]): row for row in rep.parameters["bound_table"]}
    assert table[(3, 2)]["profile_bound"] == "16"
    assert table[(3, 2)]["descent_bound"] == 8
    assert table[(3, 4)]["profile_bound"] == "64"
    assert table[(3, 4)]["descent_bound"] == 64
    cross = next(c for c in rep.cases if c["id"] == "bound-table d=3")
    assert cross["crossover_r"] == 5


def test_reports_are_deterministic_json():
    a = exp_additive_bound((0, 0, 1), 3, 1, 2, seed=7, registry=REG)
    b = exp_additive_bound((0, 0, 1), 3, 1, 2, seed=7)
    ja = json.dumps(_stripped(a), sort_keys=True)
    jb = json.dumps(_stripped(b), sort_keys=True)
    assert ja == jb
    assert a.provenance == {"tool": "norml", "version": "0.1.0", "seed": 7}


def test_verify_single_grid_and_parallel_agreement():
    serial = run_verify("negligible_kummer", seed=0, registry=REG, jobs=1)
    parallel = run_verify("negligible_kummer", seed=0, registry=REG, jobs=3)
    assert len(serial) == 8
    assert [_stripped(r) for r in serial] == [_stripped(r) for r in parallel]


def test_verify_rejects_unknown_target():
    with pytest.raises(ValueError):
        run_verify("no-such-experiment")
