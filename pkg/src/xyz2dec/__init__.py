"""Sequential decoder and Monte Carlo harness for the XYZ^2 hexagonal stabilizer code.

The XYZ^2 code on 2*d^2 qubits is treated as a concatenation of weight-2
XX-link codes with a YZZY-deformed rotated surface code.  Decoding runs in
two stages: the links are decoded first (producing a Z-correction frame and
conditional priors per upper-level qubit), then the upper-level code is
decoded with matching, belief-matching, or an exact maximum-likelihood
oracle.
"""

__version__ = "0.1.0"

from .pauli import PauliString, multiply, commutes, weight
from .codes import StabilizerCode, ConcatenationMap, build_yzzy, build_xyz2, lift, syndrome, logical_class
from .noise import (
    BiasedChannel,
    PhenomSample,
    channel_from_bias,
    sample_code_capacity,
    sample_phenomenological,
    shot_rng,
)
from .linkstage import (
    LinkFrame,
    MatchedEventPair,
    TimeMatchResult,
    apply_link_frame_phenom,
    decode_links_cc,
    decode_links_time,
    link_flip_matrix,
    link_priors,
    link_trigger_probability,
)
from .matching import DecoderGraph, MatchResult, build_graph_cc, build_graph_phenom, mwpm
from .bp import TannerGraph, bp_marginals, build_tanner_cc, build_tanner_phenom, reweight
from .mld import ClassProbabilities, MldDecoder, mld_decode, sequential_mld_decode
from .pipeline import ShotDecoder, classify, code_bundle, decode_cc, decode_phenom
from .harness import (
    ExperimentResult,
    RunConfig,
    ThresholdFit,
    fit_threshold,
    read_results_csv,
    run_point,
    wilson_interval,
    write_fit_json,
    write_results_csv,
)
