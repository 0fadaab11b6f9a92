"""Exact maximum-likelihood decoding by coset enumeration.

For small codes (n <= 20) the full stabilizer group is walked in Gray-code
order, so each group element costs one generator multiply.  The class
probability pi_L sums Prob(E * S * L) over the group for a fixed syndrome
representative E; probabilities accumulate in log-sum-exp form.

sequential_mld_decode is the executable form of the optimality argument:
link decode -> upper-level MLD with updated priors -> class relabeling
through the link frame.  Both entry points report classes relative to the
same canonical syndrome representative, so their outputs are comparable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from . import _gf2
from .codes import ConcatenationMap, StabilizerCode, build_yzzy, lift, logical_class, syndrome
from .errors import CapacityError, InfeasibleError, UsageError
from .linkstage import decode_links_cc, link_flip_matrix
from .noise import BiasedChannel
from .pauli import PauliString, multiply

MAX_N = 20
CLASS_ORDER = ("I", "X", "Y", "Z")
_LOG_FLOOR = -1e4  # per-site floor for zero-probability states


@dataclass(frozen=True)
class ClassProbabilities:
    """Unnormalized coset probabilities for the four logical classes,
    held as logs; ordering follows CLASS_ORDER."""

    log_pi: np.ndarray

    def normalized(self) -> np.ndarray:
        m = self.log_pi.max()
        v = np.exp(self.log_pi - m)
        return v / v.sum()

    def argmax_class(self) -> str:
        # ties broken in I, X, Y, Z order (first maximum wins)
        return CLASS_ORDER[int(np.argmax(self.log_pi))]

    def is_degenerate(self, rel: float = 1e-9) -> bool:
        p = np.sort(self.normalized())[::-1]
        return abs(p[0] - p[1]) <= rel * max(p[0], 1e-300)


@njit(cache=True)
def _gray_coset_logsum(gen_x, gen_z, ex, ez, logp):
    """log sum over the group generated by (gen_x, gen_z) of the coset
    probability of (ex, ez), per-site log priors logp (n, 4)."""
    g, n = gen_x.shape
    x = ex.copy()
    z = ez.copy()
    lp = 0.0
    for u in range(n):
        lp += logp[u, x[u] + 2 * z[u]]
    best = lp
    acc = 1.0
    steps = (1 << g) - 1
    for i in range(1, steps + 1):
        # Gray code: toggle generator = number of trailing zeros of i
        j = 0
        k = i
        while not k & 1:
            k >>= 1
            j += 1
        for u in range(n):
            if gen_x[j, u] or gen_z[j, u]:
                lp -= logp[u, x[u] + 2 * z[u]]
                x[u] ^= gen_x[j, u]
                z[u] ^= gen_z[j, u]
                lp += logp[u, x[u] + 2 * z[u]]
        if lp > best:
            acc = acc * np.exp(best - lp) + 1.0
            best = lp
        else:
            acc += np.exp(lp - best)
    return best + np.log(acc)


class MldDecoder:
    """Coset-enumeration decoder bound to one code."""

    def __init__(self, code: StabilizerCode):
        if code.n > MAX_N:
            raise CapacityError(f"n = {code.n} exceeds the enumeration bound {MAX_N}")
        self.code = code
        g, n = code.num_generators, code.n
        m = np.concatenate([code.gen_z, code.gen_x], axis=1)  # bit k = gz.x + gx.z
        aug = np.concatenate([m, np.eye(g, dtype=np.uint8)], axis=1)
        red, pivots = _gf2.row_reduce(aug)
        if pivots and max(pivots) >= 2 * n:
            raise UsageError("generator matrix is rank-deficient")
        self._pivots = np.array(pivots, dtype=np.intp)
        self._transform = red[:, 2 * n:]
        self._reduced = red[:, : 2 * n]
        self._class_reps = {
            "I": PauliString.identity(n),
            "X": code.logical_x,
            "Y": code.logical_y,
            "Z": code.logical_z,
        }

    def representative(self, syn: np.ndarray) -> PauliString:
        """Canonical Pauli with the given syndrome (deterministic)."""
        syn = np.asarray(syn, dtype=np.uint8)
        y = (self._transform @ syn) % 2
        r = self._pivots.shape[0]
        if y[r:].any():
            raise InfeasibleError("syndrome is not in the image of the generator map")
        v = np.zeros(2 * self.code.n, dtype=np.uint8)
        v[self._pivots] = y[:r]
        return PauliString(self.code.n, v[: self.code.n], v[self.code.n:])

    def class_probabilities(self, syn: np.ndarray, priors: np.ndarray) -> ClassProbabilities:
        if priors.shape != (self.code.n, 4):
            raise UsageError("priors must be a (n, 4) array in I, X, Y, Z order")
        logp = np.where(priors > 0, np.log(np.maximum(priors, 1e-300)), _LOG_FLOOR)
        # kernel indexes site states by x + 2z, i.e. I, X, Z, Y
        logp = np.ascontiguousarray(logp[:, [0, 1, 3, 2]])
        rep = self.representative(syn)
        out = np.empty(4)
        for i, lbl in enumerate(CLASS_ORDER):
            e = multiply(rep, self._class_reps[lbl])
            out[i] = _gray_coset_logsum(self.code.gen_x, self.code.gen_z, e.x, e.z, logp)
        return ClassProbabilities(log_pi=out)


def _channel_priors(channel: BiasedChannel, n: int) -> np.ndarray:
    return np.tile(channel.as_array(), (n, 1))


def mld_decode(code: StabilizerCode, syn: np.ndarray, priors) -> tuple[str, ClassProbabilities]:
    """Most likely logical class for a syndrome under per-qubit priors.

    ``priors`` is a (n, 4) array or a BiasedChannel applied uniformly.
    """
    if isinstance(priors, BiasedChannel):
        priors = _channel_priors(priors, code.n)
    dec = MldDecoder(code)
    probs = dec.class_probabilities(syn, priors)
    return probs.argmax_class(), probs


def sequential_mld_decode(
    code: StabilizerCode,
    cmap: ConcatenationMap,
    syn: np.ndarray,
    channel: BiasedChannel,
    upper: StabilizerCode | None = None,
) -> tuple[str, ClassProbabilities]:
    """Link decode, upper-level MLD on the updated priors, class relabeling
    through the frame.  Classes are reported relative to the same canonical
    representative mld_decode uses, so the two are directly comparable."""
    if upper is None:
        upper = build_yzzy(cmap.d)
    nl = cmap.num_links
    syn = np.asarray(syn, dtype=np.uint8)
    frame, priors, mod_plaq = decode_links_cc(syn[:nl], syn[nl:], channel, link_flip_matrix(code))
    upper_dec = MldDecoder(upper)
    upper_probs = upper_dec.class_probabilities(mod_plaq, priors)
    upper_rep = upper_dec.representative(mod_plaq)

    # map each upper-level class through lift and frame to an XYZ2 class
    # relative to the canonical full-code representative
    full_dec = MldDecoder(code)
    canon = full_dec.representative(syn)
    frame_pauli = frame.as_pauli(cmap)
    log_pi = np.full(4, -np.inf)
    reps = {"I": PauliString.identity(upper.n), "X": upper.logical_x,
            "Y": upper.logical_y, "Z": upper.logical_z}
    for i, lbl in enumerate(CLASS_ORDER):
        corr = multiply(lift(multiply(upper_rep, reps[lbl]), cmap), frame_pauli)
        target = logical_class(code, multiply(corr, canon))
        j = CLASS_ORDER.index(target)
        log_pi[j] = upper_probs.log_pi[i]
    probs = ClassProbabilities(log_pi=log_pi)
    return probs.argmax_class(), probs
