"""Full sequential decode per shot.

Order of operations: link stage (frame + conditional priors) -> upper-level
decode on the YZZY code (matching, belief-matching, or the exact MLD
oracle) -> canonical lift of the upper correction composed with the link
frame -> logical classification of the residual.

Every shot asserts the hard postcondition that the correction reproduces
the observed syndrome (code capacity) or the final perfect readout
(phenomenological); a violation is a bug, never tolerated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import bp as bp_mod
from .codes import (ConcatenationMap, StabilizerCode, build_xyz2, build_yzzy,
                    lift, logical_class, syndrome)
from .errors import ContractViolation, UsageError
from .linkstage import (apply_link_frame_phenom, decode_links_cc,
                        decode_links_time, link_flip_matrix)
from .matching import build_graph_cc, build_graph_phenom, mwpm
from .mld import MldDecoder
from .noise import (BiasedChannel, sample_code_capacity,
                    sample_phenomenological)
from .pauli import PauliString, multiply

DECODERS = ("matching", "belief-matching", "mld")
MODELS = ("code-capacity", "phenomenological")


@lru_cache(maxsize=None)
def code_bundle(d: int):
    """(xyz2 code, concatenation map, yzzy code, link flip matrix), cached."""
    code, cmap = build_xyz2(d)
    upper = build_yzzy(d)
    return code, cmap, upper, link_flip_matrix(code)


class ShotDecoder:
    """Reusable per-configuration decoder; pure per shot."""

    def __init__(self, d: int, decoder: str, model: str, channel: BiasedChannel,
                 q: float | None = None, rounds: int | None = None,
                 bp_iterations: int | None = None):
        if decoder not in DECODERS:
            raise UsageError(f"unknown decoder {decoder!r}")
        if model not in MODELS:
            raise UsageError(f"unknown model {model!r}")
        if decoder == "mld" and d > 3:
            raise UsageError("mld decoding is restricted to d <= 3")
        if decoder == "mld" and model != "code-capacity":
            raise UsageError("mld decoding supports code capacity only")
        self.d = d
        self.decoder = decoder
        self.model = model
        self.channel = channel
        self.code, self.cmap, self.upper, self.flip = code_bundle(d)
        self.num_links = self.cmap.num_links
        self.bp_iterations = d if bp_iterations is None else bp_iterations
        self.trace = None  # set to {} by callers wanting a shot trace
        if model == "code-capacity":
            self.rounds = 0
            self.q = None
            self.graph = build_graph_cc(self.upper) if decoder != "mld" else None
            self.tanner = bp_mod.build_tanner_cc(self.upper) if decoder == "belief-matching" else None
            self.mld = MldDecoder(self.upper) if decoder == "mld" else None
        else:
            self.rounds = d if rounds is None else rounds
            if self.rounds < 1:
                raise UsageError("at least one noisy round required")
            self.q = channel.p if q is None else q
            self.graph = build_graph_phenom(self.upper, self.rounds)
            self.tanner = (bp_mod.build_tanner_phenom(self.upper, self.rounds)
                           if decoder == "belief-matching" else None)
            self.mld = None

    # -- upper-level decode ------------------------------------------------
    def _upper_matching(self, defect_bits, priors, q=None) -> PauliString:
        if self.decoder == "belief-matching":
            self.tanner.set_priors(priors, q)
            post = bp_mod.bp_marginals(self.tanner, defect_bits, self.bp_iterations)
            bp_mod.reweight(self.graph, self.tanner, post)
        else:
            self.graph.reweight(priors, q)
        res = mwpm(self.graph, np.nonzero(defect_bits.reshape(-1))[0])
        x, z = self.graph.correction_bits(res.edge_ids)
        if self.trace is not None:
            self.trace["matched_pairs"] = res.pairs
            self.trace["matched_edges"] = res.edge_ids.tolist()
            self.trace["total_weight"] = res.total_weight
        return PauliString(self.upper.n, x, z)

    # -- public entry points -----------------------------------------------
    def decode_cc(self, syn: np.ndarray) -> PauliString:
        syn = np.asarray(syn, dtype=np.uint8)
        nl = self.num_links
        frame, priors, mod_plaq = decode_links_cc(syn[:nl], syn[nl:], self.channel, self.flip)
        if self.trace is not None:
            self.trace["frame_z_tops"] = frame.z_tops.tolist()
            self.trace["priors"] = priors.tolist()
            self.trace["modified_plaquette_syndrome"] = mod_plaq.tolist()
        if self.decoder == "mld":
            probs = self.mld.class_probabilities(mod_plaq, priors)
            uc = multiply(self.mld.representative(mod_plaq),
                          {"I": PauliString.identity(self.upper.n),
                           "X": self.upper.logical_x, "Y": self.upper.logical_y,
                           "Z": self.upper.logical_z}[probs.argmax_class()])
            if self.trace is not None:
                self.trace["class_probabilities"] = probs.normalized().tolist()
        else:
            uc = self._upper_matching(mod_plaq, priors)
        corr = multiply(lift(uc, self.cmap), frame.as_pauli(self.cmap))
        if not np.array_equal(syndrome(self.code, corr), syn):
            raise ContractViolation("correction does not reproduce the observed syndrome")
        return corr

    def decode_phenom(self, detectors: np.ndarray) -> PauliString:
        detectors = np.asarray(detectors, dtype=np.uint8)
        nl = self.num_links
        if detectors.shape != (self.rounds + 1, self.code.num_generators):
            raise UsageError("detector array shape mismatch")
        result = decode_links_time(np.ascontiguousarray(detectors[:, :nl].T), self.channel, self.q)
        mod_plaq, priors = apply_link_frame_phenom(detectors[:, nl:], result, self.channel, self.flip)
        if self.trace is not None:
            self.trace["link_pairs"] = [(p.link, p.t1, p.t2, p.kind) for p in result.pairs]
            self.trace["trigger_rounds"] = result.trigger_rounds.tolist()
            self.trace["frame_z_tops"] = result.frame.z_tops.tolist()
        uc = self._upper_matching(mod_plaq, priors, self.q)
        corr = multiply(lift(uc, self.cmap), result.frame.as_pauli(self.cmap))
        final = detectors.sum(axis=0) % 2  # perfect readout of the cumulative error
        if not np.array_equal(syndrome(self.code, corr), final):
            raise ContractViolation("correction does not reproduce the final readout")
        return corr

    def run_shot(self, rng: np.random.Generator) -> str:
        """Sample, decode, classify; returns the residual class label."""
        if self.model == "code-capacity":
            err = sample_code_capacity(self.code, self.channel, rng)
            corr = self.decode_cc(syndrome(self.code, err))
        else:
            sample = sample_phenomenological(self.code, self.channel, self.q, self.rounds, rng)
            corr = self.decode_phenom(sample.detectors)
            err = sample.cumulative_error
        cls = classify(self.code, err, corr)
        if self.trace is not None:
            self.trace["error"] = err.to_label()
            self.trace["correction"] = corr.to_label()
            self.trace["residual_class"] = cls
        return cls


def decode_cc(code: StabilizerCode, cmap: ConcatenationMap, syn: np.ndarray,
              channel: BiasedChannel, upper_decoder: str = "matching") -> PauliString:
    return ShotDecoder(cmap.d, upper_decoder, "code-capacity", channel).decode_cc(syn)


def decode_phenom(code: StabilizerCode, cmap: ConcatenationMap, detectors: np.ndarray,
                  channel: BiasedChannel, q: float, upper_decoder: str = "matching",
                  rounds: int | None = None) -> PauliString:
    rounds = detectors.shape[0] - 1 if rounds is None else rounds
    return ShotDecoder(cmap.d, upper_decoder, "phenomenological", channel,
                       q=q, rounds=rounds).decode_phenom(detectors)


def classify(code: StabilizerCode, error_total: PauliString, correction: PauliString) -> str:
    """Logical class of the residual; failure iff the class is not I."""
    if not np.array_equal(syndrome(code, error_total), syndrome(code, correction)):
        raise ContractViolation("error and correction syndromes disagree")
    return logical_class(code, multiply(error_total, correction))
