"""Biased Pauli channels and noise sampling.

Code-capacity noise draws one Pauli per data qubit.  Phenomenological noise
accumulates fresh data errors over ``rounds`` noisy measurement rounds, each
followed by syndrome extraction whose outcome bits flip independently with
probability ``q``; one final perfect readout closes the decoding problem.

Randomness contract: every shot draws from its own counter-based Philox
stream (see :func:`shot_rng`), so results are reproducible and independent
of execution order and worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import StabilizerCode
from .errors import UsageError
from .pauli import PauliString

# Index order used for all 4-vectors of Pauli probabilities.
PAULI_ORDER = ("I", "X", "Y", "Z")


@dataclass(frozen=True)
class BiasedChannel:
    """Single-qubit Pauli error rates with bias eta = p_z / (p_x + p_y)."""

    p: float
    eta: float  # may be math.inf
    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p_i, self.p_x, self.p_y, self.p_z])


def channel_from_bias(p: float, eta: float) -> BiasedChannel:
    """Split a total error rate ``p`` into components at bias ``eta``.

    p_x = p_y = p / (2 (1 + eta)), p_z = p eta / (1 + eta); eta = inf gives
    pure dephasing.  Biases below 1/2 (X/Y-dominated noise) are rejected.
    """
    if not 0.0 <= p < 1.0:
        raise UsageError(f"error rate p={p} outside [0, 1)")
    if eta < 0.5:
        raise UsageError(f"bias eta={eta} < 1/2 is not supported")
    if math.isinf(eta):
        p_x = p_y = 0.0
        p_z = p
    else:
        p_x = p_y = p / (2.0 * (1.0 + eta))
        p_z = p * eta / (1.0 + eta)
    return BiasedChannel(p=p, eta=eta, p_i=1.0 - p, p_x=p_x, p_y=p_y, p_z=p_z)


def shot_rng(seed: int, point_id: int, shot: int) -> np.random.Generator:
    """Counter-based substream for one Monte Carlo shot.

    The Philox key is (seed, point_id) and the 256-bit counter starts at
    shot * 2**128, so distinct shots can never overlap regardless of how
    many values each consumes.
    """
    bg = np.random.Philox(
        key=np.array([seed & 0xFFFFFFFFFFFFFFFF, point_id & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64),
        counter=np.array([0, 0, shot & 0xFFFFFFFFFFFFFFFF, 0], dtype=np.uint64),
    )
    return np.random.Generator(bg)


def _draw_pauli_bits(channel: BiasedChannel, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map uniforms to (x_bits, z_bits) with cumulative I, X, Y, Z order."""
    c1 = channel.p_i
    c2 = c1 + channel.p_x
    c3 = c2 + channel.p_y
    is_x = (u >= c1) & (u < c2)
    is_y = (u >= c2) & (u < c3)
    is_z = u >= c3
    x = (is_x | is_y).astype(np.uint8)
    z = (is_z | is_y).astype(np.uint8)
    return x, z


def sample_code_capacity(code: StabilizerCode, channel: BiasedChannel, rng: np.random.Generator) -> PauliString:
    """Independent single-qubit Pauli draw on every data qubit."""
    x, z = _draw_pauli_bits(channel, rng.random(code.n))
    return PauliString(code.n, x, z)


@dataclass(frozen=True)
class PhenomSample:
    """One phenomenological-noise shot.

    ``data_errors[t]`` is the fresh error of round t; ``raw_syndromes`` has
    ``rounds + 1`` rows (the last one is the perfect readout of the
    cumulative error) and ``detectors`` is its XOR along the time axis.
    """

    rounds: int
    data_errors: tuple[PauliString, ...]
    meas_flips: np.ndarray      # (rounds + 1, num_generators), final row zero
    raw_syndromes: np.ndarray   # (rounds + 1, num_generators)
    detectors: np.ndarray       # (rounds + 1, num_generators)

    @property
    def cumulative_error(self) -> PauliString:
        err = PauliString.identity(self.data_errors[0].n)
        for e in self.data_errors:
            err = err * e
        return err


def sample_phenomenological(
    code: StabilizerCode,
    channel: BiasedChannel,
    q: float,
    rounds: int,
    rng: np.random.Generator,
) -> PhenomSample:
    """``rounds`` noisy measurement rounds plus one perfect readout.

    Per round the draw order is fixed: ``n`` qubit uniforms, then one
    uniform per generator outcome.
    """
    if rounds < 1:
        raise UsageError("at least one noisy round required")
    g = code.num_generators
    errors: list[PauliString] = []
    raw = np.zeros((rounds + 1, g), dtype=np.uint8)
    flips = np.zeros((rounds + 1, g), dtype=np.uint8)
    cum_x = np.zeros(code.n, dtype=np.uint8)
    cum_z = np.zeros(code.n, dtype=np.uint8)
    for t in range(rounds):
        x, z = _draw_pauli_bits(channel, rng.random(code.n))
        errors.append(PauliString(code.n, x, z))
        cum_x ^= x
        cum_z ^= z
        flips[t] = (rng.random(g) < q).astype(np.uint8)
        raw[t] = ((code.gen_x @ cum_z + code.gen_z @ cum_x) % 2).astype(np.uint8) ^ flips[t]
    raw[rounds] = ((code.gen_x @ cum_z + code.gen_z @ cum_x) % 2).astype(np.uint8)
    detectors = raw.copy()
    detectors[1:] ^= raw[:-1]
    return PhenomSample(
        rounds=rounds,
        data_errors=tuple(errors),
        meas_flips=flips,
        raw_syndromes=raw,
        detectors=detectors,
    )
