import itertools
import math

import numpy as np
import pytest

from xyz2dec.codes import build_xyz2, syndrome
from xyz2dec.linkstage import (
    apply_link_frame_phenom,
    decode_links_cc,
    decode_links_time,
    link_flip_matrix,
    link_priors,
    link_trigger_probability,
)
from xyz2dec.noise import channel_from_bias
from xyz2dec.pauli import PauliString

# ---------------------------------------------------------------------------
# Independent oracle: enumerate all 16 two-qubit Pauli configurations on a
# link, group by (syndrome, upper-level class), and normalize.

_PROB = {"I": "p_i", "X": "p_x", "Y": "p_y", "Z": "p_z"}
# commuting pairs (modulo the XX stabilizer) -> effective upper-level Pauli
_CLASS = {"II": "I", "XX": "I", "ZZ": "X", "YY": "X",
          "ZY": "Y", "YZ": "Y", "XI": "Z", "IX": "Z"}
# left-multiplication by Z (phases ignored)
_Z_TIMES = {"I": "Z", "X": "Y", "Y": "X", "Z": "I"}


def _oracle_priors(channel, s):
    acc = dict.fromkeys("IXYZ", 0.0)
    for a, b in itertools.product("IXYZ", repeat=2):
        trig = (a in "YZ") ^ (b in "YZ")  # anticommutes with XX
        if trig != s:
            continue
        pair = (_Z_TIMES[a] + b) if s else (a + b)  # Z-top correction
        acc[_CLASS[pair]] += getattr(channel, _PROB[a]) * getattr(channel, _PROB[b])
    total = sum(acc.values())
    return np.array([acc[c] / total for c in "IXYZ"])


GRID = [(p, eta) for p in (0.01, 0.05, 0.1, 0.15, 0.3) for eta in (0.5, 1.0, 10.0, 300.0)]


@pytest.mark.parametrize("p,eta", GRID)
def test_priors_match_enumeration_oracle(p, eta):
    ch = channel_from_bias(p, eta)
    for s in (0, 1):
        got = link_priors(ch, s)
        assert got.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.abs(got - _oracle_priors(ch, s)).max() < 1e-12


def test_priors_frozen_values():
    ch = channel_from_bias(0.15, 0.5)
    assert np.allclose(link_priors(ch, 1), [0.25, 0.25, 0.25, 0.25], atol=1e-12)
    assert np.allclose(link_priors(ch, 0),
                       [0.884146, 0.0060976, 0.0060976, 0.1036585], atol=1e-6)
    assert link_trigger_probability(ch) == pytest.approx(0.18)
    ch10 = channel_from_bias(0.15, 10.0)
    assert np.allclose(link_priors(ch10, 1),
                       [0.47259, 0.47259, 0.027409, 0.027409], atol=1e-5)


def test_priors_noiseless():
    ch = channel_from_bias(0.0, 0.5)
    assert np.allclose(link_priors(ch, 0), [1, 0, 0, 0])
    assert link_trigger_probability(ch) == 0.0


def test_pz_given_quiet_link_increases_with_p():
    vals = [link_priors(channel_from_bias(p, 0.5), 0)[3]
            for p in np.linspace(0.01, 0.49, 25)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_bias_mapping_curves():
    etas = np.linspace(0.5, 300.0, 400)
    rows1 = np.array([link_priors(channel_from_bias(0.15, e), 1) for e in etas])
    rows0 = np.array([link_priors(channel_from_bias(0.15, e), 0) for e in etas])
    # exact symmetries of the triggered-link prior
    assert np.abs(rows1[:, 0] - rows1[:, 1]).max() < 1e-15
    assert np.abs(rows1[:, 2] - rows1[:, 3]).max() < 1e-15
    # X-heavy for every eta above the depolarizing point
    assert (rows1[1:, 1] > rows1[1:, 2]).all()
    # depolarizing start and pure-dephasing limit
    assert np.allclose(rows1[0], 0.25, atol=1e-12)
    inf_row = link_priors(channel_from_bias(0.15, math.inf), 1)
    assert inf_row[0] == pytest.approx(0.5, abs=1e-9)
    assert inf_row[1] == pytest.approx(0.5, abs=1e-9)
    # seven of the eight curves are monotone in eta; P_{Y,0} ~ p_y p_z rises
    # from the depolarizing point and then decays, so it is excluded
    for rows, skip in ((rows0, 2), (rows1, None)):
        for j in range(4):
            if j == skip:
                continue
            diffs = np.diff(rows[:, j])
            assert (diffs >= -1e-12).all() or (diffs <= 1e-12).all()
    peak = np.argmax(rows0[:, 2])
    assert 0 < peak < len(etas) - 1  # interior maximum


# ---------------------------------------------------------------------------
# Code-capacity link decoding.

def test_decode_links_cc_trivial_and_idempotent():
    code, _ = build_xyz2(3)
    ch = channel_from_bias(0.1, 0.5)
    flips = link_flip_matrix(code)
    zeros = np.zeros(9, dtype=np.uint8)
    plaq = np.zeros(8, dtype=np.uint8)
    frame, priors, modified = decode_links_cc(zeros, plaq, ch, flips)
    assert not frame.z_tops.any()
    assert (modified == plaq).all()
    assert np.allclose(priors, link_priors(ch, 0))
    # idempotence: decoding the (now clean) output changes nothing
    frame2, _, modified2 = decode_links_cc(zeros, modified, ch, flips)
    assert not frame2.z_tops.any() and (modified2 == modified).all()


def test_decode_links_cc_single_interior_link():
    code, cmap = build_xyz2(3)
    ch = channel_from_bias(0.1, 0.5)
    flips = link_flip_matrix(code)
    link_syn = np.zeros(9, dtype=np.uint8)
    link_syn[4] = 1
    plaq = np.zeros(8, dtype=np.uint8)
    frame, priors, modified = decode_links_cc(link_syn, plaq, ch, flips)
    # the frame is Z on the top qubit of link 4; its syndrome against the
    # lifted generators gives exactly the flipped plaquette bits
    z_top = PauliString.single(18, 8, "Z")
    assert frame.as_pauli(cmap) == z_top
    assert (modified == syndrome(code, z_top)[9:]).all()
    assert modified.sum() > 0
    assert np.allclose(priors[4], link_priors(ch, 1))
    assert np.allclose(priors[0], link_priors(ch, 0))
    # self-consistency: the frame's own link syndrome equals the input
    assert (syndrome(code, frame.as_pauli(cmap))[:9] == link_syn).all()


# ---------------------------------------------------------------------------
# Time matching of link detector streams.

def _stream(rounds, events):
    s = np.zeros((1, rounds + 1), dtype=np.uint8)
    for t in events:
        s[0, t] = 1
    return s


def test_time_match_adjacent_events_are_measurement():
    ch = channel_from_bias(0.05, 0.5)
    res = decode_links_time(_stream(5, [1, 2]), ch, q=0.05)
    assert len(res.pairs) == 1
    assert res.pairs[0].kind == "measurement"
    assert not res.trigger_rounds.any()
    assert not res.frame.z_tops.any()


def test_time_match_distant_events_are_data():
    ch = channel_from_bias(0.05, 0.5)
    res = decode_links_time(_stream(5, [1, 4]), ch, q=0.05)
    assert len(res.pairs) == 1
    pair = res.pairs[0]
    assert pair.kind == "data" and pair.r == 3
    assert (res.trigger_rounds[0] == [0, 1, 1, 1, 0]).all()
    assert not res.frame.z_tops.any()  # even event count, clean readout


def test_time_match_no_events():
    ch = channel_from_bias(0.05, 0.5)
    res = decode_links_time(np.zeros((4, 6), dtype=np.uint8), ch, q=0.05)
    assert res.pairs == []
    assert not res.trigger_rounds.any()


def test_time_match_boundary_event():
    ch = channel_from_bias(0.05, 0.5)
    res = decode_links_time(_stream(5, [3]), ch, q=0.05)
    assert len(res.pairs) == 1
    pair = res.pairs[0]
    assert pair.kind == "data" and pair.t2 == -1
    assert (res.trigger_rounds[0] == [0, 0, 0, 1, 1]).all()
    assert res.frame.z_tops[0] == 1  # error persists into the final readout


def _brute_force_cost(events, wq, wp):
    """Minimum cost over all pairings (any pair, any boundary subset)."""
    events = tuple(events)
    if not events:
        return 0.0
    t = events[0]
    best = wp + _brute_force_cost(events[1:], wq, wp)
    for j in range(1, len(events)):
        cost = min((events[j] - t) * wq, 2 * wp)
        rest = events[1:j] + events[j + 1:]
        best = min(best, cost + _brute_force_cost(rest, wq, wp))
    return best


def test_time_match_is_optimal_vs_brute_force():
    ch = channel_from_bias(0.08, 2.0)
    q = 0.03
    wq = -math.log(q)
    wp = -math.log(link_trigger_probability(ch))
    rng = np.random.default_rng(11)
    for _ in range(60):
        rounds = int(rng.integers(3, 10))
        k = int(rng.integers(0, min(7, rounds + 1)))
        events = sorted(rng.choice(rounds + 1, size=k, replace=False).tolist())
        res = decode_links_time(_stream(rounds, events), ch, q)
        got = sum(p.cost for p in res.pairs)
        assert got == pytest.approx(_brute_force_cost(events, wq, wp), abs=1e-9)


# ---------------------------------------------------------------------------
# Folding the phenomenological link stage into the upper level.

def test_apply_frame_no_triggers():
    code, _ = build_xyz2(3)
    ch = channel_from_bias(0.05, 0.5)
    flips = link_flip_matrix(code)
    res = decode_links_time(np.zeros((9, 4), dtype=np.uint8), ch, q=0.05)
    dets = np.zeros((4, 8), dtype=np.uint8)
    modified, priors = apply_link_frame_phenom(dets, res, ch, flips)
    assert not modified.any()
    assert np.allclose(priors, link_priors(ch, 0))


def test_apply_frame_single_data_interval():
    code, _ = build_xyz2(3)
    ch = channel_from_bias(0.05, 0.5)
    flips = link_flip_matrix(code)
    streams = np.zeros((9, 4), dtype=np.uint8)
    streams[4, 0] = streams[4, 3] = 1  # data pair on link 4 spanning [0, 3)
    res = decode_links_time(streams, ch, q=0.05)
    assert res.pairs[0].kind == "data"
    dets = np.zeros((4, 8), dtype=np.uint8)
    modified, priors = apply_link_frame_phenom(dets, res, ch, flips)
    touched = np.nonzero(flips[:, 4])[0]
    # only the transition rounds of the frame show up in the detectors
    assert (modified[0, touched] == 1).all()
    assert (modified[3, touched] == 1).all()
    assert not modified[1].any() and not modified[2].any()
    # the fresh-error prior marks the switch-on round only; the rounds
    # inside the interval carry no new error
    assert np.allclose(priors[0, 4], link_priors(ch, 1))
    assert np.allclose(priors[1, 4], link_priors(ch, 0))
    assert np.allclose(priors[2, 4], link_priors(ch, 0))
    assert np.allclose(priors[0, 0], link_priors(ch, 0))


def test_apply_frame_interior_pair_marks_switch_on_only():
    code, _ = build_xyz2(3)
    ch = channel_from_bias(0.05, 0.5)
    flips = link_flip_matrix(code)
    streams = np.zeros((9, 6), dtype=np.uint8)  # 5 noisy rounds
    streams[1, 0] = streams[1, 4] = 1  # data interval [0, 4)
    res = decode_links_time(streams, ch, q=0.05)
    assert res.pairs[0].kind == "data"
    dets = np.zeros((6, 8), dtype=np.uint8)
    _, priors = apply_link_frame_phenom(dets, res, ch, flips)
    s1 = link_priors(ch, 1)
    s0 = link_priors(ch, 0)
    # the fresh trigger sits at the switch-on round; the switch-off round
    # and the rounds inside the interval keep the quiet-link prior
    assert np.allclose(priors[0, 1], s1)
    for t in (1, 2, 3, 4):
        assert np.allclose(priors[t, 1], s0)


def test_apply_frame_measurement_pair_is_inert():
    code, _ = build_xyz2(3)
    ch = channel_from_bias(0.05, 0.5)
    flips = link_flip_matrix(code)
    streams = np.zeros((9, 4), dtype=np.uint8)
    streams[2, 1] = streams[2, 2] = 1
    res = decode_links_time(streams, ch, q=0.05)
    assert res.pairs[0].kind == "measurement"
    dets = np.zeros((4, 8), dtype=np.uint8)
    modified, priors = apply_link_frame_phenom(dets, res, ch, flips)
    assert not modified.any()
    assert np.allclose(priors, link_priors(ch, 0))
