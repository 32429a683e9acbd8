from __future__ import annotations

import pytest

from qfpure.suite import CASES, format_ledger, run_suite


def test_cheap_cases_pass_and_are_deterministic():
    cases = ["WITT-GALOIS", "EXAMPLE-4", "ETALE-SMOKE", "KER-R-ACTION"]
    rows = run_suite(cases, seed=7)
    assert {r.case for r in rows} == set(cases)
    assert all(r.verdict in ("pass", "discrepancy") for r in rows)
    assert format_ledger(rows) == format_ledger(run_suite(cases, seed=7))


def test_discrepancies_are_recorded_not_failed():
    rows = run_suite(["KER-R-ACTION"])
    disc = [r for r in rows if r.verdict == "discrepancy"]
    assert len(disc) == 2 and all("a = " in r.detail for r in disc)


def test_seeded_sampling_is_reproducible():
    a = run_suite(["COFINALITY"], seed=3, samples={"COFINALITY": 20})
    b = run_suite(["COFINALITY"], seed=3, samples={"COFINALITY": 20})
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]


def test_unknown_case():
    with pytest.raises(KeyError):
        run_suite(["NOPE"])


def test_case_list():
    assert len(CASES) == len(set(CASES))


def test_full_suite_has_no_failures():
    rows = run_suite()
    assert not [r for r in rows if r.verdict == "fail"]
    assert sorted(r.case for r in rows if r.verdict == "discrepancy") == ["KER-R-ACTION", "KER-R-ACTION",
                                                                         "WITT-AXIOMS"]
