import math

import numpy as np
import pytest

from frontlab.model import validate_params
from frontlab.phaseplane import shoot
from frontlab.selfmap import (NotCZero, OriginUndefined, SelfMapPair,
                              TargetOutOfRange, kstar_invariance,
                              map_params, transform_point,
                              transformed_residual)

P1212 = validate_params(1, 2, 1, 2)


def test_map_reference_example():
    pair = map_params(P1212, 2.0)
    t = pair.target
    assert (t.n, t.p, t.q) == (2.0, 5.0, 3.0)
    assert t.k == pytest.approx(math.sqrt(2.0))


def test_map_identity_when_n2_equals_n1():
    src = validate_params(3, 5, 3, 2)
    t = map_params(src, 3.0).target
    assert (t.n, t.p, t.q, t.k) == (src.n, src.p, src.q, src.k)


def test_map_round_trip():
    src = validate_params(2, 5, 3, 1.3)
    fwd = map_params(src, 4.0).target
    back = map_params(fwd, 2.0).target
    assert back.n == pytest.approx(src.n)
    assert back.p == pytest.approx(src.p)
    assert back.q == pytest.approx(src.q)
    assert back.k == pytest.approx(src.k, rel=1e-14)


def test_map_preserves_exponent_ratios():
    src = validate_params(2, 6, 3, 1.0)
    t = map_params(src, 5.0).target
    r = 5.0 / 2.0
    assert (t.p + 1.0) == pytest.approx((src.p + 1.0) * r)
    assert (t.q + 1.0) == pytest.approx((src.q + 1.0) * r)
    # k sqrt(n) is the map invariant
    assert t.k * math.sqrt(t.n) == pytest.approx(
        src.k * math.sqrt(src.n))


def test_map_rejects_out_of_range_targets():
    with pytest.raises(TargetOutOfRange):
        map_params(validate_params(3, 5, 1, 1), 1.0)   # q2 = -1/3
    with pytest.raises(TargetOutOfRange):
        map_params(P1212, 0.5)


def test_transform_point_values():
    src = validate_params(3, 5, 3, 2)   # d = sqrt(1/2)
    u, w = transform_point(src, (0.5, 0.1))
    assert u == pytest.approx(0.25)
    assert w == pytest.approx(0.1 * 0.5 ** -2.0 / math.sqrt(0.5))


def test_transform_point_rejects_origin():
    with pytest.raises(OriginUndefined):
        transform_point(P1212, (0.0, 0.0))


def test_residual_requires_c_zero():
    src = validate_params(3, 3, 1, 2)
    traj = shoot(src, 1.0)
    with pytest.raises(NotCZero):
        transformed_residual(src, traj, 2.0)


def test_transformed_residual_small():
    src = validate_params(3, 3, 1, 2)
    traj = shoot(src, 0.0)
    assert transformed_residual(src, traj, 2.0) < 1e-4


def test_transformed_residual_detects_wrong_coefficient():
    # negative control: breaking the k sqrt(n) relation must be visible
    src = validate_params(3, 3, 1, 2)
    traj = shoot(src, 0.0)
    good = transformed_residual(src, traj, 3.0)   # identity map
    wrong_src = validate_params(3, 3, 1, 2 * 1.3)
    bad = transformed_residual(wrong_src, traj, 3.0)
    assert good < 1e-4 < 1e-2 < bad


def test_kstar_invariance_reference_pair():
    rep = kstar_invariance((1, 2, 1), 2.0)
    assert rep["source"]["kstar"] == pytest.approx(2.0)
    assert rep["target"]["kstar"] == pytest.approx(math.sqrt(2.0))
    assert rep["invariant_defect"] < 5e-3


def test_pair_record_is_frozen():
    pair = map_params(P1212, 2.0)
    assert isinstance(pair, SelfMapPair)
    with pytest.raises(Exception):
        pair.n2 = 3.0
