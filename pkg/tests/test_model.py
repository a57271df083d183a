import math

import numpy as np
import pytest

from ris_sensing.model import (
    ChannelParams,
    RisConfigKind,
    RngStream,
    SecondaryNetParams,
    SensingParams,
    h1_statistic_from_gains,
    rayleigh_from_uniform,
    sample_h0_energy,
    sample_h1_statistic,
    sample_rayleigh,
)
from ris_sensing.specfun import erfc

AP, RELAY = RisConfigKind.ACCESS_POINT, RisConfigKind.RELAY
MILLION = 1_000_000


@pytest.fixture(scope="module")
def rayleigh_draws():
    return sample_rayleigh(RngStream(11), MILLION)


def test_inverse_transform_endpoint():
    assert rayleigh_from_uniform(1.0) == 0.0


def test_single_draw_is_float():
    g = sample_rayleigh(RngStream(1))
    assert isinstance(g, float) and g >= 0


def test_rayleigh_moments(rayleigh_draws):
    g = rayleigh_draws
    assert g.min() >= 0
    assert g.mean() == pytest.approx(math.sqrt(math.pi / 2), rel=0.005)
    assert np.mean(g * g) == pytest.approx(2.0, rel=0.005)
    assert g.var() == pytest.approx(2.0 - math.pi / 2, rel=0.01)


def test_relay_product_moments():
    rng = RngStream(12)
    prod = sample_rayleigh(rng, MILLION) * sample_rayleigh(rng, MILLION)
    assert prod.mean() == pytest.approx(math.pi / 2, rel=0.01)
    assert prod.var() == pytest.approx(4.0 - math.pi**2 / 4, rel=0.01)


def test_zero_gains_give_zero_statistic():
    p = ChannelParams(n_reflectors=1)
    assert h1_statistic_from_gains(p, AP, [0.0]) == 0.0
    assert h1_statistic_from_gains(p, RELAY, [0.0], [1.3]) == 0.0


def test_relay_from_gains_requires_both():
    with pytest.raises(ValueError):
        h1_statistic_from_gains(ChannelParams(), RELAY, np.ones(16))


def test_h1_statistic_formula_from_gains():
    p = ChannelParams(n_reflectors=3, beta=2.0, r_c=2.0, r_r=0.5, gamma_bar=3.0)
    gc, gr = np.array([1.0, 2.0, 0.5]), np.array([0.2, 1.0, 4.0])
    assert h1_statistic_from_gains(p, AP, gc) == pytest.approx(3.0 * 2.0**-2 * 3.5)
    assert h1_statistic_from_gains(p, RELAY, gc, gr) == pytest.approx(3.0 * 1.0 * (0.2 + 2.0 + 2.0))


@pytest.mark.parametrize("kind, expected", [(AP, 16 * math.sqrt(math.pi / 2)), (RELAY, 16 * math.pi / 2)])
def test_h1_statistic_mean(kind, expected):
    s = sample_h1_statistic(ChannelParams(n_reflectors=16), kind, RngStream(5), MILLION)
    assert s.min() >= 0
    assert s.mean() == pytest.approx(expected, rel=0.005)


def test_h1_statistic_scales_linearly():
    base = ChannelParams(n_reflectors=16, r_c=1.7, beta=2.5)
    s1 = sample_h1_statistic(base, AP, RngStream(3), 1000)
    s2 = sample_h1_statistic(ChannelParams(n_reflectors=16, r_c=1.7, beta=2.5, gamma_bar=2.0), AP, RngStream(3), 1000)
    np.testing.assert_array_equal(s2, 2.0 * s1)
    s3 = sample_h1_statistic(ChannelParams(n_reflectors=16, r_c=1.0), AP, RngStream(3), 1000)
    np.testing.assert_allclose(s1, 1.7**-2.5 * s3, rtol=1e-14)


class _ZeroGenerator:
    def standard_normal(self, size=None):
        return np.zeros(size) if size is not None else 0.0


class _ZeroStream:
    generator = _ZeroGenerator()


def test_h0_energy_zero_noise_draw():
    assert sample_h0_energy(1.0, _ZeroStream()) == 0.0


def test_h0_energy_moments_and_tail():
    y = sample_h0_energy(1.0, RngStream(21), MILLION)
    assert y.min() >= 0
    assert y.mean() == pytest.approx(1.0, rel=0.01)
    p = np.mean(y > 2.0)
    se = math.sqrt(p * (1 - p) / y.size)
    assert abs(p - erfc(1.0)) <= 3 * se


def test_h0_energy_scales_with_n0():
    y1 = sample_h0_energy(1.0, RngStream(4), 100)
    y4 = sample_h0_energy(4.0, RngStream(4), 100)
    np.testing.assert_allclose(y4, 4.0 * y1, rtol=1e-14)


def test_h0_energy_rejects_bad_n0():
    with pytest.raises(ValueError):
        sample_h0_energy(0.0, RngStream(1))


def test_stream_determinism():
    a = RngStream(99, 7).uniform_open0(1000)
    b = RngStream(99, 7).uniform_open0(1000)
    c = RngStream(99, 8).uniform_open0(1000)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.all((a > 0) & (a <= 1))
    np.testing.assert_array_equal(RngStream(99, 7).substream(3).uniform_open0(10),
                                  RngStream(99, 7).substream(3).uniform_open0(10))
    assert not np.array_equal(RngStream(99, 7).substream(3).uniform_open0(10),
                              RngStream(99, 7).substream(4).uniform_open0(10))


def test_stream_sequence_is_pinned():
    # Philox keyed through SeedSequence: fixed across platforms and numpy releases
    u = RngStream(0, 0).generator.random(3)
    np.testing.assert_array_equal(u, [0.7211967525405779, 0.026925274171797242, 0.4025382164530227])


@pytest.mark.parametrize("bad", [dict(n_reflectors=0), dict(n_reflectors=2.5), dict(beta=0.0), dict(r_c=-1.0),
                                 dict(r_r=0.0), dict(gamma_bar=float("inf")), dict(n0=0.0)])
def test_channel_params_validation(bad):
    with pytest.raises(ValueError):
        ChannelParams(**bad)


def test_other_params_validation():
    with pytest.raises(ValueError):
        SensingParams(y_th=-1.0)
    with pytest.raises(ValueError):
        SensingParams(alpha=1.5)
    with pytest.raises(ValueError):
        SecondaryNetParams(lambda_density=-1.0)
    with pytest.raises(ValueError):
        SecondaryNetParams(r_s=-0.1)


def test_config_kind_parse():
    assert RisConfigKind.parse("AP") is AP
    assert RisConfigKind.parse("relay") is RELAY
    with pytest.raises(ValueError):
        RisConfigKind.parse("mirror")
