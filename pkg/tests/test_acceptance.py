"""Acceptance gate: one test per top-level criterion.

Each test runs the corresponding end-to-end criterion and prints its
single pass/fail line, so `pytest -v -s tests/test_acceptance.py` doubles
as the human-readable acceptance report.  Tolerances are pinned inside
the criterion implementations; the tests only assert the verdicts.
"""

from shiftmodels import acceptance
from shiftmodels.acceptance import ALL_CRITERIA, format_line


def _check(result):
    print(format_line(result))
    assert result.passed, format_line(result)


def test_criterion_registry_is_complete():
    assert len(ALL_CRITERIA) == 12
    numbers = [int(fn.__name__.split("_")[1]) for fn in ALL_CRITERIA]
    assert numbers == list(range(1, 13))


def test_criterion_01_cayley_round_trip():
    _check(acceptance.criterion_1_cayley_round_trip())


def test_criterion_02_concavity_equivalence():
    _check(acceptance.criterion_2_concavity_equivalence())


def test_criterion_03_model_projection():
    _check(acceptance.criterion_3_model_projection())


def test_criterion_04_model_intertwining():
    _check(acceptance.criterion_4_model_intertwining())


def test_criterion_05_reproducing_property():
    _check(acceptance.criterion_5_reproducing_property())


def test_criterion_06_kernel_closed_forms():
    _check(acceptance.criterion_6_kernel_closed_forms())


def test_criterion_07_multiplier_semigroup():
    _check(acceptance.criterion_7_multiplier_semigroup())


def test_criterion_08_wold_split():
    _check(acceptance.criterion_8_wold_split())


def test_criterion_09_ladder_decomposition():
    _check(acceptance.criterion_9_ladder_decomposition())


def test_criterion_10_growth_bound():
    _check(acceptance.criterion_10_growth_bound())


def test_criterion_11_caradus_certificates():
    _check(acceptance.criterion_11_caradus_certificates())


def test_criterion_12_concave_power_growth():
    _check(acceptance.criterion_12_concave_power_growth())
