import math

import pytest

from frontlab.critical import (BracketDegenerate, CriticalResult, cbar,
                               cbar_explicit, kstar)
from frontlab.model import validate_params
from frontlab.phaseplane import DIRECT_CLASSES, ConnectionClass


def test_cbar_matches_closed_form_pn_q1():
    # p = n, q = 1, k^2(n-1) > 1: critical velocity (k^2-1)/k
    r = cbar(validate_params(3, 3, 1, 2), tol=1e-6)
    assert r.value == pytest.approx(1.5, abs=1e-5)


def test_cbar_matches_closed_form_p2n1_qn():
    r = cbar(validate_params(3, 5, 3, 2), tol=1e-6)
    assert r.value == pytest.approx((6.0 + math.sqrt(24.0)) / 6.0, abs=1e-5)


def test_cbar_bracket_invariants():
    r = cbar(validate_params(3, 3, 1, 2), tol=1e-6)
    assert r.bracket_lo <= r.value <= r.bracket_hi
    assert r.bracket_hi - r.bracket_lo <= 1e-6
    assert r.endpoint_classes[0] in DIRECT_CLASSES
    assert r.endpoint_classes[1] is ConnectionClass.OVERSHOOT
    assert r.evaluations <= 80


def test_cbar_negative_below_threshold():
    r = cbar(validate_params(3, 3, 1, 0.5), tol=1e-6)
    assert r.value < -0.1


def test_cbar_tol_floor():
    with pytest.raises(ValueError):
        cbar(validate_params(3, 3, 1, 2), tol=1e-12)


def test_kstar_simple_families():
    assert kstar(3, 3, 1, tol=1e-6).value == pytest.approx(1.0, abs=1e-4)
    assert kstar(3, 5, 1, tol=1e-6).value == pytest.approx(
        4.0 / 3.0, abs=1e-4)


def test_kstar_conditionally_convective_closed_form():
    # n <= (q+1)/2: k* = 2 sqrt(p-q)/n exactly
    r = kstar(2, 4, 3)
    assert r.value == 1.0
    assert r.evaluations == 2


def test_kstar_reference_range_source():
    # n = 1 is admitted for the self-map reference computation
    r = kstar(1, 2, 1)
    assert r.value == pytest.approx(2.0)


def test_kstar_consistent_with_cbar_sign():
    ks = kstar(3, 3, 1, tol=1e-6).value
    below = cbar(validate_params(3, 3, 1, ks * 0.9), tol=1e-6).value
    above = cbar(validate_params(3, 3, 1, ks * 1.1), tol=1e-6).value
    assert below < 0.0 < above


def test_result_json_schema():
    r = cbar(validate_params(3, 3, 1, 2), tol=1e-6)
    import json
    doc = json.loads(r.to_json())
    assert set(doc) == {"value", "bracket_lo", "bracket_hi", "tol",
                       "evaluations"}


def test_cbar_explicit_patterns():
    assert cbar_explicit(validate_params(3, 3, 1, 2)) == pytest.approx(1.5)
    assert cbar_explicit(validate_params(3, 5, 3, 2)) == pytest.approx(
        (6.0 + math.sqrt(24.0)) / 6.0)
    # validity condition fails: k^2(n-1) <= 1
    assert cbar_explicit(validate_params(3, 3, 1, 0.5)) is None
    # no matching pattern at all
    assert cbar_explicit(validate_params(3, 4, 2, 1)) is None


def test_cbar_agreement_with_explicit_at_tight_tol():
    p = validate_params(3, 3, 1, 1.7)
    want = cbar_explicit(p)
    got = cbar(p, tol=1e-8).value
    assert got == pytest.approx(want, abs=1e-6)
