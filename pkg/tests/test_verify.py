import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from conftest import functions
from lowsens import families
from lowsens.core import BooleanFunction, CapacityError
from lowsens.treewalk.trees import tree_sensitivity
from lowsens.verify import (CHECK_SETS, _block_scan, _functions_scan, dnf_checks,
                            entropy_checks, level_entropy_bound, moment_ratio, orchard_checks,
                            parse_checks, random_tables, scan_all, scan_long_run, scan_sample,
                            spanning_tree_exists, tail_bound_check, walk_checks)


def test_scan_examples():
    rep = scan_all(3, ("degts",))
    assert rep.scanned == 256 and rep.checks["degts"].violations == 0
    rep = scan_all(4, ("moments",))
    assert rep.scanned == 65536 and rep.passed
    rep = scan_all(3, ("moments_high",))
    hi = rep.to_json()["checks"]["moments_high"]
    assert hi["I3_ne_s3"] > 0 and hi["asserted"] is False and rep.passed


def test_moments_high_witness_is_and3_like():
    f = families.and_(3)
    rep = _functions_scan((3, [f.bits], ("moments_high",), "x"))
    assert rep.to_json()["checks"]["moments_high"]["I3_ne_s3_witness"] == "08"


def test_full_core_scan_n4_passes():
    rep = scan_all(4, CHECK_SETS["core"])
    assert rep.passed and rep.scanned == 65536
    j = rep.to_json()
    assert j["checks"]["moments_high"]["ratio3_max"]["value"] == "5/4"
    assert j["checks"]["moments_high"]["ratio4_max"]["value"] == "7/4"


def test_moment_ratio_examples():
    assert moment_ratio(families.and_(3), 3) == Fraction(9, 10)
    assert moment_ratio(families.constant(3, 0), 3) == 0


def test_tail_examples():
    r = tail_bound_check(families.or_ham_parity(3, 1), 1)
    assert r.iffk <= 96 and r.passed
    r = tail_bound_check(families.parity(4), 2)
    assert r.iffk == 12 and r.bound == (32 * 4) ** 2 * 2 and r.passed
    assert tail_bound_check(families.constant(3, 0), 2).passed


def test_entropy_examples():
    e = entropy_checks(families.and_(2))
    assert e.H == pytest.approx(2.0) and e.I == 1 and e.level_entropy == pytest.approx(1.5)
    assert e.level_entropy_pass and e.per_level_pass
    e = entropy_checks(families.parity(5))
    assert e.H == 0 and e.level_entropy_pass
    lhs, rhs = level_entropy_bound([0.25, 0.25])
    assert lhs == pytest.approx(1.0) and rhs == pytest.approx(1.0)


def test_dnf_examples():
    r = dnf_checks(families.dnf_parity_rows(2, 2), 2, 2)
    assert r.sk == 6 and r.sk_pass and r.tail_pass
    r = dnf_checks(families.dnf_parity_rows(2, 3), 2, 3)
    assert r.sk == Fraction(27, 2) and r.sk_pass and r.tail_pass


def test_parse_checks():
    assert parse_checks("core") == CHECK_SETS["core"]
    assert parse_checks("moments,moments") == ("moments",)
    with pytest.raises(ValueError):
        parse_checks("bogus")


def test_capacity():
    with pytest.raises(CapacityError):
        scan_all(5)
    with pytest.raises(CapacityError):
        scan_sample(7, 2, 0)


def _same(a, b):
    if isinstance(a, float) and isinstance(b, float):
        return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(_same(a[k], b[k]) for k in a)
    return a == b


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vectorised_scan_agrees_with_per_function_path(n):
    tabs = random_tables(n, 300, 5)
    idx = tabs.astype(np.int64) @ (np.int64(1) << np.arange(1 << n))
    checks = CHECK_SETS["all"]
    a = _functions_scan((n, tabs, checks, "s")).to_json()
    b = _block_scan((n, idx, checks, "s")).to_json()
    assert _same(a, b)


def test_sampled_scans_with_structural_checks():
    rep = scan_sample(3, 64, 1, CHECK_SETS["all"] + ("orchard", "walks"))
    assert rep.passed
    rep = scan_sample(5, 16, 2, ("moments", "ts_depth", "chain", "walks"))
    assert rep.passed and rep.scanned == 16


def test_report_is_independent_of_worker_count():
    a = scan_all(3, CHECK_SETS["all"], workers=1).to_json()
    b = scan_all(3, CHECK_SETS["all"], workers=3).to_json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


@given(functions(max_n=4))
def test_orchard_and_walk_checks(f):
    assert orchard_checks(f)
    assert walk_checks(f)


def test_spanning_tree_dp_matches_search():
    for n in (2, 3):
        F = np.arange(1 << (1 << n), dtype=np.int64)
        bits = ((F[:, None] >> np.arange(1 << n)) & 1).astype(np.uint8)
        dp = spanning_tree_exists(bits, n)
        direct = [tree_sensitivity(BooleanFunction(n, b)) == n for b in bits]
        assert dp.tolist() == direct
    tabs = random_tables(4, 400, 8)
    direct = [tree_sensitivity(BooleanFunction(4, b)) == 4 for b in tabs]
    assert spanning_tree_exists(tabs, 4).tolist() == direct


def test_long_run_resumes_from_checkpoint(tmp_path):
    cp = str(tmp_path / "cp.json")
    a = scan_long_run(cp, 0, 1 << 14, blocks_per_save=1)
    assert a.passed and a.scanned == 1 << 14 and a.next_index == 1 << 14
    b = scan_long_run(cp, 0, 1 << 15, blocks_per_save=1)
    assert b.passed and b.scanned == 1 << 15
    fresh = scan_long_run(str(tmp_path / "other.json"), 0, 1 << 15)
    assert fresh.to_json() == b.to_json()
