"""Stage one of the sequential decoder: the XX-link codes.

Code capacity: every triggered link gets a Z correction on its top qubit,
the lifted-generator syndrome bits are updated accordingly, and each
upper-level qubit receives a conditional prior over effective upper-level
Paulis (I, X, Y, Z order throughout).

Phenomenological noise: each link produces a detector stream over time.
Events in a stream are explained by measurement-flip chains or by data
errors via a small per-link matching; data explanations determine in which
rounds a link was freshly triggered (s = 1 prior there) and yield the
inferred true link syndrome over time, from which the correction frame and
the plaquette-detector modification follow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .codes import StabilizerCode, ConcatenationMap
from .errors import ContractViolation, UsageError
from .noise import BiasedChannel
from .pauli import PauliString


def link_priors(channel: BiasedChannel, s: int) -> np.ndarray:
    """Conditional upper-level prior (I, X, Y, Z) given link syndrome ``s``.

    The two physical Paulis on a link combine into an effective upper-level
    Pauli; conditioning on the link outcome gives, up to normalization,

        s = 0:  (p_i^2 + p_x^2,  p_z^2 + p_y^2,  2 p_y p_z,  2 p_x p_i)
        s = 1:  (p_z p_i + p_x p_y) twice, then (p_y p_i + p_x p_z) twice.
    """
    pi, px, py, pz = channel.p_i, channel.p_x, channel.p_y, channel.p_z
    if s == 0:
        v = np.array([pi * pi + px * px, pz * pz + py * py, 2 * py * pz, 2 * px * pi])
    elif s == 1:
        a = pz * pi + px * py
        b = py * pi + px * pz
        v = np.array([a, a, b, b])
    else:
        raise UsageError(f"link syndrome bit must be 0 or 1, got {s}")
    total = v.sum()
    if total <= 0.0:
        raise UsageError("link outcome has zero probability under this channel")
    return v / total


def link_trigger_probability(channel: BiasedChannel) -> float:
    """p_(s=1): probability that one round of noise triggers an XX link."""
    pi, px, py, pz = channel.p_i, channel.p_x, channel.p_y, channel.p_z
    return 2.0 * (pz * pi + px * py + py * pi + px * pz)


def link_flip_matrix(code: StabilizerCode) -> np.ndarray:
    """F[j, u] = 1 iff Z on the top qubit of link u flips lifted generator j."""
    if code.kind != "XYZ2":
        raise UsageError("link flip matrix is only defined for the concatenated code")
    num_links = code.n // 2
    return np.ascontiguousarray(code.gen_x[num_links:, 0::2])


@dataclass(frozen=True)
class LinkFrame:
    """Z corrections on link top qubits, one bit per link."""

    z_tops: np.ndarray

    def as_pauli(self, cmap: ConcatenationMap) -> PauliString:
        n = 2 * cmap.num_links
        p = PauliString.identity(n)
        tops = np.array([t for t, _ in cmap.link_of_upper_qubit])
        p.z[tops] = self.z_tops
        return p


def decode_links_cc(
    link_syndrome: np.ndarray,
    plaquette_syndrome: np.ndarray,
    channel: BiasedChannel,
    flip_matrix: np.ndarray,
) -> tuple[LinkFrame, np.ndarray, np.ndarray]:
    """Code-capacity link decode.

    Returns the Z-top frame, the (num_links, 4) prior array, and the
    plaquette syndrome with the frame's flips applied.
    """
    z_tops = np.asarray(link_syndrome, dtype=np.uint8)
    if z_tops.ndim != 1 or z_tops.shape[0] != flip_matrix.shape[1]:
        raise UsageError("link syndrome length does not match the code")
    row0 = link_priors(channel, 0)
    # the s=1 row is undefined for noiseless channels; build it only if used
    row1 = link_priors(channel, 1) if z_tops.any() else row0
    priors = np.stack([row0, row1])[z_tops]
    modified = (np.asarray(plaquette_syndrome, dtype=np.uint8) ^ (flip_matrix @ z_tops % 2)).astype(np.uint8)
    return LinkFrame(z_tops=z_tops), priors, modified


# ---------------------------------------------------------------------------
# Time matching for phenomenological link streams.

@dataclass(frozen=True)
class MatchedEventPair:
    link: int
    t1: int
    t2: int          # -1 for an event matched to the final time boundary
    kind: str        # "measurement" or "data"
    cost: float

    @property
    def r(self) -> int:
        return self.t2 - self.t1 if self.t2 >= 0 else -1


@dataclass
class TimeMatchResult:
    pairs: list[MatchedEventPair]
    # trigger_rounds[u, t] = 1 iff link u is inferred to be in the triggered
    # state during round t (data-pair intervals [t1, t2) and boundary tails)
    trigger_rounds: np.ndarray          # (num_links, rounds) uint8
    inferred_raw: np.ndarray            # (num_links, rounds + 1) uint8
    frame: LinkFrame = field(init=False)

    def __post_init__(self):
        self.frame = LinkFrame(z_tops=self.inferred_raw[:, -1].copy())


def _match_stream(events: list[int], rounds: int, wq: float, wp: float) -> list[tuple[int, int, str, float]]:
    """Minimum-cost explanation of one link's event layers.

    Costs are negative log likelihoods: a chain of r measurement flips costs
    r*wq, a data pair costs 2*wp, an odd data string running to the final
    time boundary costs wp.  Pair costs are concave in the time gap, so
    matching consecutive events is optimal; ties prefer the measurement
    explanation (q^r == p_link^2 classifies as measurement).  Returns
    (t1, t2, kind, cost) tuples with t2 = -1 for boundary matches.
    """
    m = len(events)
    best = [0.0] * (m + 1)
    choice: list[tuple[int, int, str, float] | None] = [None] * (m + 1)
    for i in range(m - 1, -1, -1):
        t = events[i]
        # odd data string terminated at the final readout
        best[i] = wp + best[i + 1]
        choice[i] = (t, -1, "data", wp)
        if i + 1 < m:
            t2 = events[i + 1]
            meas = (t2 - t) * wq
            data = 2 * wp
            kind, cost = ("measurement", meas) if meas <= data else ("data", data)
            # a consecutive pair never costs more than two boundary matches;
            # on ties prefer the pair so adjacent events stay associated
            if cost + best[i + 2] <= best[i]:
                best[i] = cost + best[i + 2]
                choice[i] = (t, t2, kind, cost)
    out = []
    i = 0
    while i < m:
        c = choice[i]
        out.append(c)
        i += 1 if c[1] == -1 else 2
    return out


def decode_links_time(
    streams: np.ndarray,
    channel: BiasedChannel,
    q: float,
) -> TimeMatchResult:
    """Per-link 1D time matching over detector streams.

    ``streams`` has shape (num_links, rounds + 1); column ``rounds`` is the
    perfect final readout layer.
    """
    streams = np.asarray(streams, dtype=np.uint8)
    num_links, layers = streams.shape
    rounds = layers - 1
    p_link = link_trigger_probability(channel)
    wq = -math.log(q) if q > 0 else 1e9
    wp = -math.log(p_link) if p_link > 0 else 1e9

    pairs: list[MatchedEventPair] = []
    trigger = np.zeros((num_links, rounds), dtype=np.uint8)
    raw = np.zeros((num_links, layers), dtype=np.uint8)
    for u in np.nonzero(streams.any(axis=1))[0]:
        events = np.nonzero(streams[u])[0].tolist()
        for t1, t2, kind, cost in _match_stream(events, rounds, wq, wp):
            pairs.append(MatchedEventPair(link=int(u), t1=t1, t2=t2, kind=kind, cost=cost))
            if kind != "data":
                continue
            if t2 == -1:
                raw[u, t1:] ^= 1
            else:
                raw[u, t1:t2] ^= 1
        if raw[u, rounds] != streams[u].sum() % 2:
            raise ContractViolation("inferred link syndrome disagrees with event parity")
    # trigger flags span the whole inferred-on interval [t1, t2)
    trigger[:] = raw[:, :rounds]
    return TimeMatchResult(pairs=pairs, trigger_rounds=trigger, inferred_raw=raw)


def apply_link_frame_phenom(
    plaquette_detectors: np.ndarray,
    result: TimeMatchResult,
    channel: BiasedChannel,
    flip_matrix: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Fold the link stage into the upper-level phenomenological problem.

    Returns the plaquette detector array (rounds + 1, num_plaquettes) with
    the inferred link-syndrome transitions removed, and the per-round prior
    array of shape (rounds, num_links, 4).
    """
    dets = np.asarray(plaquette_detectors, dtype=np.uint8)
    frame_syn = (flip_matrix @ result.inferred_raw % 2).astype(np.uint8)  # (plaq, layers)
    diff = frame_syn.copy()
    diff[:, 1:] ^= frame_syn[:, :-1]
    modified = dets ^ diff.T

    # a fresh trigger is a rising edge of the inferred raw stream: the round
    # in which a data error switched the link on; rounds strictly inside an
    # interval, and the round that switches it back off, keep the quiet-link
    # prior (only switch-on rounds are flagged as triggers)
    rounds = result.trigger_rounds.shape[1]
    raw = result.inferred_raw
    prev = np.zeros_like(raw[:, :rounds])
    prev[:, 1:] = raw[:, : rounds - 1]
    fresh = (raw[:, :rounds] & (1 - prev)).astype(np.uint8)
    row0 = link_priors(channel, 0)
    row1 = link_priors(channel, 1) if fresh.any() else row0
    priors = np.stack([row0, row1])[fresh.T.astype(np.intp)]  # (rounds, num_links, 4)
    return modified, priors
