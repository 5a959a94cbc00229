import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontlab.model import (EigenData, ExponentOrder, InvalidParams,
                            ModelParams, NonPositiveK, NTooSmall, P2Class,
                            QTooSmall, ctilde, p2_eigen, validate_params)


def test_valid_tuple_roundtrip():
    p = validate_params(3, 5, 3, 2)
    assert (p.n, p.p, p.q, p.k) == (3.0, 5.0, 3.0, 2.0)
    assert not p.reference_range


@pytest.mark.parametrize("npqk,err", [
    ((3, 3, 1, 0.0), NonPositiveK),
    ((3, 3, 1, -2.0), NonPositiveK),
    ((3, 1, 1, 1.0), ExponentOrder),
    ((3, 3, 3, 1.0), ExponentOrder),
    ((3, 3, 0.5, 1.0), QTooSmall),
    ((0.5, 3, 1, 1.0), NTooSmall),
    ((float("nan"), 3, 1, 1.0), InvalidParams),
])
def test_rejects_bad_parameters(npqk, err):
    with pytest.raises(err):
        validate_params(*npqk)


def test_reference_range_flag():
    assert validate_params(1, 2, 1, 1).reference_range
    assert validate_params(1.5, 2, 1, 1).reference_range
    assert not validate_params(2, 4, 3, 1).reference_range


def test_params_are_frozen():
    p = validate_params(3, 3, 1, 2)
    with pytest.raises(Exception):
        p.k = 5.0


def test_eigen_closed_form_simple():
    # n=p=3, q=1, k=2, c=1.5: mu = -4.5, disc = 12.25
    e = p2_eigen(validate_params(3, 3, 1, 2), 1.5)
    assert e.lambda_plus == pytest.approx(-0.5)
    assert e.lambda_minus == pytest.approx(-4.0)
    assert e.e_minus == (1.0, e.lambda_minus)
    assert e.imag_abs == 0.0
    assert e.p2_class is P2Class.STABLE_NODE


def test_stability_bands():
    p = validate_params(3, 3, 1, 2)   # kn = 6, 2 sqrt(p-q) = 2 sqrt 2
    root = 2.0 * math.sqrt(2.0)
    assert p2_eigen(p, 6.0 - root - 1e-9).p2_class is P2Class.STABLE_NODE
    assert p2_eigen(p, 6.0 - root + 1e-9).p2_class is P2Class.STABLE_FOCUS
    assert p2_eigen(p, 6.0 + 1e-9).p2_class is P2Class.UNSTABLE_FOCUS
    assert p2_eigen(p, 6.0 + root).p2_class is P2Class.UNSTABLE_NODE


def test_band_edges_match_discriminant_sign():
    p = validate_params(2, 4, 3, 1.5)
    for c in (-3.0, 0.0, 2.0, 3.0, 5.0, 8.0):
        e = p2_eigen(p, c)
        if e.p2_class in (P2Class.STABLE_FOCUS, P2Class.UNSTABLE_FOCUS):
            assert e.discriminant < 0 or abs(c - p.k * p.n) < 1e-12
        else:
            assert e.discriminant >= 0


def test_complex_pair_representation():
    p = validate_params(3, 3, 1, 2)
    e = p2_eigen(p, 6.0)   # c = kn: disc = -4(p-q)
    assert e.lambda_plus == e.lambda_minus == 0.0
    assert e.imag_abs == pytest.approx(math.sqrt(2.0))


def test_ctilde_value():
    assert ctilde(validate_params(3, 3, 1, 0.5)) == pytest.approx(
        1.5 + 2.0 * math.sqrt(2.0))


_params = st.tuples(
    st.floats(2.0, 9.0), st.floats(1.0, 5.0),
    st.floats(0.1, 6.0), st.floats(0.1, 4.0))


@settings(max_examples=300, deadline=None)
@given(_params, st.floats(-6.0, 10.0))
def test_trace_and_determinant_identities(draw, c):
    n, q, dp, k = draw
    p = q + dp
    e = p2_eigen(validate_params(n, p, q, k), c)
    mu = c - k * n
    if e.discriminant >= 0:
        assert e.lambda_plus + e.lambda_minus == pytest.approx(mu, abs=1e-12)
        assert e.lambda_plus * e.lambda_minus == pytest.approx(
            p - q, abs=1e-12)
        assert e.lambda_plus >= e.lambda_minus
    else:
        assert 2.0 * e.lambda_plus == pytest.approx(mu, abs=1e-12)
        assert e.lambda_plus ** 2 + e.imag_abs ** 2 == pytest.approx(
            p - q, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(_params, st.floats(-6.0, 10.0))
def test_eigenvectors_lie_in_kernel(draw, c):
    n, q, dp, k = draw
    p = q + dp
    e = p2_eigen(validate_params(n, p, q, k), c)
    if e.discriminant < 0:
        return
    # (J - lambda I) e = 0 with J = [[0, 1], [-(p-q), c-kn]]
    for lam, vec in ((e.lambda_plus, e.e_plus),
                     (e.lambda_minus, e.e_minus)):
        r1 = vec[1] - lam * vec[0]
        r2 = -(p - q) * vec[0] + (c - k * n) * vec[1] - lam * vec[1]
        assert abs(r1) < 1e-10 and abs(r2) < 1e-9


def test_eigendata_is_plain_real_record():
    e = p2_eigen(validate_params(3, 3, 1, 2), 1.5)
    assert isinstance(e, EigenData)
    assert all(isinstance(v, float) for v in
               (e.lambda_plus, e.lambda_minus, e.discriminant, e.imag_abs))
