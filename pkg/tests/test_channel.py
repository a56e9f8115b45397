import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from femtoreuse.channel import (
    ChannelParams, LinkClass, LinkRealization, free_space_gain, mean_path_gain, received_power,
    sample_fast_fading, sample_shadowing,
)

UNIT = ChannelParams(p0_femto=1.0, p0_macro=1.0)


def test_direct_evaluation_unit_p0():
    assert mean_path_gain(LinkClass.FEMTO_OWN, 10.0, 0, UNIT) == pytest.approx(1e-2)


def test_inverse_square_law():
    g1 = mean_path_gain(LinkClass.FEMTO_OWN, 7.0, 0, UNIT)
    g2 = mean_path_gain(LinkClass.FEMTO_OWN, 14.0, 0, UNIT)
    assert g1 / g2 == pytest.approx(4.0)


def test_one_wall_costs_ten_db():
    g0 = mean_path_gain(LinkClass.FEMTO_CROSS, 30.0, 0, UNIT)
    g1 = mean_path_gain(LinkClass.FEMTO_CROSS, 30.0, 1, UNIT)
    assert g1 / g0 == pytest.approx(0.1)


def test_link_classes_bind_exponents():
    assert UNIT.constants(LinkClass.FEMTO_OWN)[1] == 2.0
    assert UNIT.constants(LinkClass.FEMTO_CROSS)[1] == 3.0
    assert UNIT.constants(LinkClass.MACRO_DOWN)[1] == 3.5
    assert UNIT.shadow_sigma(LinkClass.FEMTO_OWN) == 0.0
    assert UNIT.shadow_sigma(LinkClass.FEMTO_CROSS) == 4.0
    assert UNIT.shadow_sigma(LinkClass.MACRO_DOWN) == 8.0


def test_default_p0_is_free_space_at_one_metre():
    p = ChannelParams()
    lam = 299_792_458.0 / 900e6
    assert p.p0_femto == pytest.approx((lam / (4 * math.pi)) ** 2)
    assert free_space_gain(900.0) == p.p0_macro


def test_slant_range_uses_antenna_heights():
    p = ChannelParams()
    assert p.macro_distance(0.0) == pytest.approx(48.0)
    assert p.macro_distance(14.0) == pytest.approx(50.0)


def test_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(eta2=1.5)
    with pytest.raises(ValueError):
        ChannelParams(shadow_sigma_macro=-1)
    with pytest.raises(ValueError):
        ChannelParams(wall_loss=-0.1)
    with pytest.raises(ValueError):
        LinkRealization(xi=0.0)
    with pytest.raises(ValueError):
        LinkRealization(z=-1.0)


def test_distance_must_be_positive():
    with pytest.raises(ValueError):
        mean_path_gain(LinkClass.FEMTO_OWN, 0.0, 0, UNIT)


def test_received_power_examples():
    assert received_power(0.01, LinkClass.FEMTO_OWN, 5.0, 0, UNIT) == pytest.approx(4e-4)
    assert received_power(0.0, LinkClass.MACRO_DOWN, 500.0, 0, UNIT) == 0.0


def test_own_link_ignores_shadowing():
    shadowed = ChannelParams(p0_femto=1.0, shadow_sigma_femto=6.0)
    real = LinkRealization(xi=3.7, z=1.0)
    a = received_power(0.01, LinkClass.FEMTO_OWN, 5.0, 0, shadowed, real)
    b = received_power(0.01, LinkClass.FEMTO_OWN, 5.0, 0, UNIT, LinkRealization())
    assert a == b


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(list(LinkClass)), st.floats(1.0, 2000.0), st.floats(1.001, 3.0),
       st.floats(1e-4, 10.0), st.floats(0.01, 100.0))
def test_monotone_in_distance_and_linear_in_power(link, d, stretch, p, k):
    near = received_power(p, link, d, 1, UNIT)
    far = received_power(p, link, d * stretch, 1, UNIT)
    assert far < near
    assert received_power(k * p, link, d, 1, UNIT) == pytest.approx(k * near, rel=1e-12)


def test_shadowing_zero_sigma_is_one():
    rng = np.random.default_rng(0)
    assert sample_shadowing(0.0, rng) == 1.0
    assert np.all(sample_shadowing(0.0, rng, 10) == 1.0)


def test_shadowing_moments_in_db():
    db = 10.0 * np.log10(sample_shadowing(8.0, np.random.default_rng(11), 100_000))
    assert abs(db.mean()) < 0.1
    assert db.std() == pytest.approx(8.0, abs=0.1)


def test_fast_fading_mean_and_ks_distance():
    z = sample_fast_fading(np.random.default_rng(12), 1_000_000)
    assert z.mean() == pytest.approx(1.0, abs=0.005)
    s = np.sort(z[:100_000])
    n = s.size
    cdf = 1.0 - np.exp(-s)
    ks = max(np.max(np.arange(1, n + 1) / n - cdf), np.max(cdf - np.arange(n) / n))
    assert ks < 0.01
