"""Belief propagation over the mechanism/check Tanner graph.

Variables are error mechanisms: quaternary per-qubit variables for
code-capacity decoding (states I, X, Y, Z with Table I priors) and, under
phenomenological noise, one quaternary data variable per (round, qubit)
plus one binary variable per measurement outcome.  Checks are the observed
syndrome bits or detectors; a variable state participates in a check
through its anticommutation bit, so check messages are binary even for
quaternary variables.

Flooding schedule, sum-product, no damping.  Posteriors reweight the
matching graph (belief-matching); BP never makes a hard decision itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import StabilizerCode
from .errors import UsageError
from .matching import DecoderGraph

EPS = 1e-12
_LOG_FLOOR = -1e9


@dataclass
class TannerGraph:
    """Bipartite mechanism/check structure with per-variable priors."""

    num_vars: int
    num_checks: int
    num_upper: int
    rounds: int                  # 0 for code capacity
    var_nstates: np.ndarray     # 2 or 4 per variable
    var_kind: np.ndarray        # 0 = data mechanism, 1 = measurement flip
    var_qubit: np.ndarray       # upper qubit (data) or generator (meas)
    var_round: np.ndarray
    edge_var: np.ndarray        # sorted by check
    edge_check: np.ndarray
    edge_mask: np.ndarray       # (E, 4) anticommutation bit per state
    check_ptr: np.ndarray       # reduceat offsets into the edge arrays
    priors: np.ndarray = field(default=None, repr=False)  # (V, 4)

    def set_priors(self, priors: np.ndarray, q=None) -> None:
        """Install per-qubit prior 4-vectors (and q for measurement vars)."""
        self.priors = np.zeros((self.num_vars, 4))
        data = self.var_kind == 0
        if self.rounds == 0:
            if priors.shape != (self.num_upper, 4):
                raise UsageError("prior array shape mismatch")
            self.priors[data] = priors[self.var_qubit[data]]
        else:
            if priors.shape != (self.rounds, self.num_upper, 4):
                raise UsageError("prior array shape mismatch")
            self.priors[data] = priors[self.var_round[data], self.var_qubit[data]]
            if q is None:
                raise UsageError("phenomenological Tanner graph requires q")
            meas = ~data
            qv = np.asarray(q, dtype=float)
            q_each = qv if qv.ndim == 0 else qv[self.var_round[meas], self.var_qubit[meas]]
            self.priors[meas, 0] = 1.0 - q_each
            self.priors[meas, 1] = q_each


def _site_masks(upper: StabilizerCode, u: int):
    """(checks, mask4 rows) for the faces adjacent to qubit u."""
    adj = np.nonzero(upper.gen_x[:, u] | upper.gen_z[:, u])[0]
    masks = np.zeros((adj.shape[0], 4), dtype=np.uint8)
    masks[:, 1] = upper.gen_z[adj, u]                        # X mechanism
    masks[:, 2] = upper.gen_x[adj, u] ^ upper.gen_z[adj, u]  # Y
    masks[:, 3] = upper.gen_x[adj, u]                        # Z
    return adj, masks


def _assemble(num_vars, num_checks, num_upper, rounds, nstates, kind, qubit, rnd, evar, echeck, emask):
    evar = np.asarray(evar, dtype=np.int64)
    echeck = np.asarray(echeck, dtype=np.int64)
    emask = np.asarray(emask, dtype=np.uint8)
    order = np.argsort(echeck, kind="stable")
    evar, echeck, emask = evar[order], echeck[order], emask[order]
    counts = np.bincount(echeck, minlength=num_checks)
    if (counts == 0).any():
        raise UsageError("a check is touched by no variable")
    ptr = np.concatenate([[0], np.cumsum(counts)[:-1]]).astype(np.int64)
    return TannerGraph(
        num_vars=num_vars, num_checks=num_checks, num_upper=num_upper, rounds=rounds,
        var_nstates=np.asarray(nstates, dtype=np.int8), var_kind=np.asarray(kind, dtype=np.int8),
        var_qubit=np.asarray(qubit, dtype=np.int64), var_round=np.asarray(rnd, dtype=np.int64),
        edge_var=evar, edge_check=echeck, edge_mask=emask, check_ptr=ptr,
    )


def build_tanner_cc(upper: StabilizerCode) -> TannerGraph:
    """Quaternary variable per qubit, check per face."""
    evar, echeck, emask = [], [], []
    for u in range(upper.n):
        adj, masks = _site_masks(upper, u)
        for c, m in zip(adj, masks):
            evar.append(u)
            echeck.append(int(c))
            emask.append(m)
    n = upper.n
    return _assemble(n, upper.num_generators, n, 0,
                     np.full(n, 4), np.zeros(n), np.arange(n), np.zeros(n),
                     evar, echeck, emask)


def build_tanner_phenom(upper: StabilizerCode, rounds: int) -> TannerGraph:
    """Data variables per (round, qubit), binary measurement variables per
    (round, generator); checks are the detectors (g, t), index t * G + g."""
    if rounds < 1:
        raise UsageError("at least one noisy round required")
    g = upper.num_generators
    nstates, kind, qubit, rnd = [], [], [], []
    evar, echeck, emask = [], [], []
    site = [_site_masks(upper, u) for u in range(upper.n)]
    v = 0
    for t in range(rounds):
        for u in range(upper.n):
            adj, masks = site[u]
            for c, m in zip(adj, masks):
                evar.append(v)
                echeck.append(t * g + int(c))
                emask.append(m)
            nstates.append(4)
            kind.append(0)
            qubit.append(u)
            rnd.append(t)
            v += 1
    flip = np.array([0, 1, 0, 0], dtype=np.uint8)
    for t in range(rounds):
        for gg in range(g):
            for c in (t * g + gg, (t + 1) * g + gg):
                evar.append(v)
                echeck.append(c)
                emask.append(flip)
            nstates.append(2)
            kind.append(1)
            qubit.append(gg)
            rnd.append(t)
            v += 1
    return _assemble(v, (rounds + 1) * g, upper.n, rounds,
                     nstates, kind, qubit, rnd, evar, echeck, emask)


def bp_marginals(graph: TannerGraph, observed: np.ndarray, iterations: int) -> np.ndarray:
    """Sum-product posteriors after ``iterations`` flooding rounds.

    ``observed`` holds one bit per check.  Returns a (num_vars, 4) array of
    normalized posteriors (binary variables occupy the first two columns).
    iterations = 0 returns the priors unchanged.
    """
    if graph.priors is None:
        raise UsageError("set_priors must be called before bp_marginals")
    if iterations < 0:
        raise UsageError("iterations must be nonnegative")
    observed = np.asarray(observed, dtype=np.uint8).reshape(-1)
    if observed.shape[0] != graph.num_checks:
        raise UsageError("observed bit count does not match checks")

    prior = graph.priors
    logp = np.where(prior > 0, np.log(np.maximum(prior, 1e-300)), _LOG_FLOOR)
    if iterations == 0:
        return prior.copy()

    mask = graph.edge_mask.astype(bool)
    evar, ptr = graph.edge_var, graph.check_ptr
    sign = 1.0 - 2.0 * observed.astype(float)

    # initial variable-to-check messages: P(anticommute bit = 1)
    v2c = (prior[evar] * graph.edge_mask).sum(axis=1)
    v2c = np.clip(v2c, EPS, 1.0 - EPS)

    belief_log = None
    for _ in range(iterations):
        # check update: t_e = sign(check) * prod_{e' != e} (1 - 2 v2c)
        val = 1.0 - 2.0 * v2c
        zero = np.abs(val) < 1e-300
        safe = np.where(zero, 1.0, val)
        prod = np.multiply.reduceat(safe, ptr)
        nzero = np.add.reduceat(zero.astype(np.int64), ptr)
        pc, zc = prod[graph.edge_check], nzero[graph.edge_check]
        t = np.where(zc == 0, pc / safe,
                     np.where(zero & (zc == 1), pc, 0.0))
        t = t * sign[graph.edge_check]
        m1 = np.clip((1.0 - t) / 2.0, EPS, 1.0)
        m0 = np.clip((1.0 + t) / 2.0, EPS, 1.0)
        lc = np.where(mask, np.log(m1)[:, None], np.log(m0)[:, None])

        acc = logp.copy()
        np.add.at(acc, evar, lc)
        # extrinsic (leave-one-out) distributions per edge
        ext = acc[evar] - lc
        ext -= ext.max(axis=1, keepdims=True)
        ext = np.exp(ext)
        ext /= ext.sum(axis=1, keepdims=True)
        v2c = np.clip((ext * graph.edge_mask).sum(axis=1), EPS, 1.0 - EPS)
        belief_log = acc

    belief_log = belief_log - belief_log.max(axis=1, keepdims=True)
    post = np.exp(belief_log)
    post[prior <= 0] = 0.0
    post /= post.sum(axis=1, keepdims=True)
    post = np.clip(post, EPS, 1.0 - EPS)
    post[prior <= 0] = 0.0
    post /= post.sum(axis=1, keepdims=True)
    return post


def posterior_priors(graph: TannerGraph, posteriors: np.ndarray):
    """Reshape BP posteriors into the prior-array layout of DecoderGraph.

    Returns (prior4, q_like): (num_upper, 4) for code capacity, or
    ((rounds, num_upper, 4), (rounds, num_checks-per-layer)) under
    phenomenological noise.
    """
    data = graph.var_kind == 0
    if graph.rounds == 0:
        out = np.zeros((graph.num_upper, 4))
        out[graph.var_qubit[data]] = posteriors[data]
        return out, None
    out = np.zeros((graph.rounds, graph.num_upper, 4))
    out[graph.var_round[data], graph.var_qubit[data]] = posteriors[data]
    meas = ~data
    g = graph.num_checks // (graph.rounds + 1)
    qarr = np.zeros((graph.rounds, g))
    qarr[graph.var_round[meas], graph.var_qubit[meas]] = posteriors[meas, 1]
    return out, qarr


def reweight(dgraph: DecoderGraph, tgraph: TannerGraph, posteriors: np.ndarray) -> DecoderGraph:
    """Install BP posteriors as matching-edge probabilities.

    Structure is unchanged; only probabilities and weights move.
    """
    prior4, qarr = posterior_priors(tgraph, posteriors)
    dgraph.reweight(prior4, qarr)
    return dgraph
