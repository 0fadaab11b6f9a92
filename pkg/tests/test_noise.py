import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from xyz2dec.codes import build_xyz2, syndrome
from xyz2dec.errors import UsageError
from xyz2dec.noise import (
    channel_from_bias,
    sample_code_capacity,
    sample_phenomenological,
    shot_rng,
)


def test_channel_depolarizing():
    ch = channel_from_bias(0.15, 0.5)
    assert ch.p_x == pytest.approx(0.05)
    assert ch.p_y == pytest.approx(0.05)
    assert ch.p_z == pytest.approx(0.05)
    assert ch.p_i == pytest.approx(0.85)


def test_channel_biased():
    ch = channel_from_bias(0.3, 10.0)
    assert ch.p_z == pytest.approx(0.3 * 10 / 11)
    assert ch.p_x == pytest.approx(0.3 / 22)
    assert ch.p_x == ch.p_y
    assert ch.p_i + ch.p_x + ch.p_y + ch.p_z == pytest.approx(1.0)


def test_channel_pure_dephasing():
    ch = channel_from_bias(0.2, math.inf)
    assert ch.p_x == 0.0 and ch.p_y == 0.0
    assert ch.p_z == pytest.approx(0.2)


def test_channel_validation():
    with pytest.raises(UsageError):
        channel_from_bias(-0.1, 1.0)
    with pytest.raises(UsageError):
        channel_from_bias(1.0, 1.0)
    with pytest.raises(UsageError):
        channel_from_bias(0.1, 0.3)


# subnormal p underflows the per-Pauli rates and degrades the ratio check
@given(st.one_of(st.just(0.0), st.floats(1e-30, 0.99)), st.floats(0.5, 1e6))
def test_channel_normalized_and_bias_exact(p, eta):
    ch = channel_from_bias(p, eta)
    assert ch.p_i + ch.p_x + ch.p_y + ch.p_z == pytest.approx(1.0)
    if ch.p_x + ch.p_y > 0:
        assert ch.p_z / (ch.p_x + ch.p_y) == pytest.approx(eta)
    assert min(ch.p_i, ch.p_x, ch.p_y, ch.p_z) >= 0.0


def test_shot_rng_determinism_and_independence():
    a = shot_rng(1, 42, 7).random(16)
    b = shot_rng(1, 42, 7).random(16)
    assert (a == b).all()
    assert not (a == shot_rng(1, 42, 8).random(16)).all()
    assert not (a == shot_rng(2, 42, 7).random(16)).all()
    assert not (a == shot_rng(1, 43, 7).random(16)).all()


def test_code_capacity_zero_rate_is_identity():
    code, _ = build_xyz2(3)
    ch = channel_from_bias(0.0, 0.5)
    err = sample_code_capacity(code, ch, shot_rng(0, 0, 0))
    assert not err.x.any() and not err.z.any()


def test_code_capacity_statistics():
    code, _ = build_xyz2(3)
    ch = channel_from_bias(0.3, 10.0)
    counts = np.zeros(4)
    shots = 2000
    for s in range(shots):
        err = sample_code_capacity(code, ch, shot_rng(0, 5, s))
        idx = err.x + 2 * err.z  # I, X, Z, Y
        for k, j in ((0, 0), (1, 1), (3, 2), (2, 3)):  # map to I, X, Y, Z
            counts[j] += (idx == k).sum()
    freq = counts / (shots * code.n)
    assert np.allclose(freq, ch.as_array(), atol=0.01)


def test_phenom_sample_shapes_and_consistency():
    code, _ = build_xyz2(3)
    ch = channel_from_bias(0.05, 0.5)
    smp = sample_phenomenological(code, ch, q=0.05, rounds=4, rng=shot_rng(0, 9, 3))
    g = code.num_generators
    assert smp.raw_syndromes.shape == (5, g)
    assert smp.meas_flips.shape == (5, g)
    assert not smp.meas_flips[-1].any()  # final readout is perfect
    # the last raw row is the true syndrome of the cumulative error
    assert (smp.raw_syndromes[-1] == syndrome(code, smp.cumulative_error)).all()
    # detectors are the time-difference of raw syndromes
    exp = smp.raw_syndromes.copy()
    exp[1:] ^= smp.raw_syndromes[:-1]
    assert (smp.detectors == exp).all()
    # detector XOR over time telescopes back to the final syndrome
    assert (smp.detectors.sum(axis=0) % 2 == smp.raw_syndromes[-1]).all()


def test_phenom_noiseless():
    code, _ = build_xyz2(3)
    ch = channel_from_bias(0.0, 0.5)
    smp = sample_phenomenological(code, ch, q=0.0, rounds=3, rng=shot_rng(0, 1, 0))
    assert not smp.detectors.any()
    assert not smp.cumulative_error.x.any()


def test_phenom_requires_a_round():
    code, _ = build_xyz2(2)
    with pytest.raises(UsageError):
        sample_phenomenological(code, channel_from_bias(0.1, 0.5), 0.1, 0, shot_rng(0, 0, 0))
