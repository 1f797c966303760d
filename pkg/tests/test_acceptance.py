"""Every acceptance criterion at its stated tolerance and full trial count.

One PASS/FAIL line per criterion is printed (and repeated in the terminal
summary).
"""

import numpy as np
import pytest

from lprips import acceptance
from lprips.metric import NormDescriptor, norm_eval

import conftest


def _report(res):
    line = res.line()
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    return res


@pytest.fixture(scope="module")
def norm_axioms():
    return acceptance.check_norm_axioms()


def test_01_circle_thresholds():
    assert _report(acceptance.check_circle()).ok


def test_02_grid_oracle():
    assert _report(acceptance.check_grid()).ok


def test_03_stability_campaign():
    assert _report(acceptance.check_stability()).ok


def test_04_magnitude_examples():
    assert _report(acceptance.check_magnitude()).ok


def test_05_les_exactness():
    assert _report(acceptance.check_les()).ok


def test_06_oracle_equivalences():
    assert _report(acceptance.check_oracles()).ok


def test_07_norm_axioms_attainable_part(norm_axioms):
    """Everything except subadditivity of the min-over-orderings norms holds."""
    _report(norm_axioms)
    assert norm_axioms.data["unexpected"] == {}
    assert norm_axioms.data["C_n monotone"]


@pytest.mark.xfail(strict=True, reason="min-over-orderings norms are not subadditive (explicit counterexample below)")
def test_07_norm_axioms_full_criterion(norm_axioms):
    assert norm_axioms.ok


def test_07_symmetric_subadditivity_counterexample():
    D, E = (acceptance.triangle_matrix(*entries) for entries in acceptance.SUBADDITIVITY_COUNTEREXAMPLE)
    nu = NormDescriptor(1.0, symmetric=True)
    assert norm_eval(nu, D) == norm_eval(nu, E) == 2.0
    assert norm_eval(nu, D + E) == 5.0
    assert np.all(D + E == acceptance.triangle_matrix(2.0, 3.0, 3.0))


def test_08_sandwich_inclusions():
    assert _report(acceptance.check_sandwich()).ok


def test_09_ss_bridge():
    assert _report(acceptance.check_ss_bridge()).ok


def test_10_kolmogorov_quotient():
    assert _report(acceptance.check_kolmogorov()).ok


def test_11_prism_identity():
    assert _report(acceptance.check_prism()).ok
