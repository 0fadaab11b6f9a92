"""Minimum-weight perfect matching decoder for the upper-level code.

The decoding graph has one node per detector (plaquette bit, or plaquette
bit per measurement layer under phenomenological noise) plus a virtual
boundary node.  Error mechanisms are single upper-level Paulis per qubit
(and per round): Y and Z mechanisms flip at most two detectors and become
graph edges directly; an X mechanism flips up to four and is decomposed
into its Y-edge and Z-edge, contributing its probability to both, except
near the boundary where X itself flips at most two detectors and gets its
own edge.  Parallel contributions p1, p2 on one edge combine as
p1 (1 - p2) + p2 (1 - p1).

Matching is exact: all-pairs defect distances come from Dijkstra runs, pairs
with d(i, j) >= b(i) + b(j) (boundary costs b) are discarded - some optimal
solution never uses them - and each connected component of the remaining
pair graph is solved by subset DP, falling back to blossom matching for
components too large to enumerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .codes import StabilizerCode
from .errors import ContractViolation, UsageError

P_MIN = 1e-15
P_MAX = 0.5 - 1e-9
W_CAP = 60.0
DP_MAX = 14  # largest component solved by subset DP

KIND_TIME, KIND_X, KIND_Y, KIND_Z = 0, 1, 2, 3
# prior column (I, X, Y, Z order) supplying each space-edge kind
_KIND_COL = {KIND_X: 1, KIND_Y: 2, KIND_Z: 3}


def _pxor(a, b):
    return a * (1.0 - b) + b * (1.0 - a)


def _weight_from_prob(p: np.ndarray) -> np.ndarray:
    p = np.clip(p, P_MIN, P_MAX)
    return np.minimum(np.log((1.0 - p) / p), W_CAP)


def _space_edge_specs(upper: StabilizerCode):
    """Per-qubit edge specs: (detectors tuple, qubit, kind, include_x)."""
    specs = []
    for u in range(upper.n):
        det_y = tuple(np.nonzero(upper.gen_x[:, u] ^ upper.gen_z[:, u])[0])  # faces acting X or Z
        det_z = tuple(np.nonzero(upper.gen_x[:, u])[0])                      # faces acting X or Y
        if not det_y or not det_z:
            raise ContractViolation(f"undetectable single-qubit mechanism on qubit {u}")
        if len(det_y) > 2 or len(det_z) > 2:
            raise ContractViolation(f"detector set larger than 2 on qubit {u}; invalid layout")
        direct_x = len(det_y) + len(det_z) <= 2
        specs.append((det_y, u, KIND_Y, not direct_x))
        specs.append((det_z, u, KIND_Z, not direct_x))
        if direct_x:
            specs.append((det_y + det_z, u, KIND_X, False))
    return specs


@dataclass
class DecoderGraph:
    """Static matching-graph structure with per-shot reweightable edges."""

    num_nodes: int
    num_upper: int
    rounds: int                      # 0 for code capacity
    edge_u: np.ndarray               # int32
    edge_v: np.ndarray               # int32, -1 = boundary
    src_qubit: np.ndarray            # upper qubit (space) or plaquette (time)
    src_kind: np.ndarray             # int8, KIND_*
    src_round: np.ndarray            # layer (phenom) or 0 (cc)
    include_x: np.ndarray            # bool, X mechanism folded into this edge
    probs: np.ndarray = field(default=None, repr=False)
    weights: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        ne = self.edge_u.shape[0]
        if self.probs is None:
            self.probs = np.zeros(ne)
        if self.weights is None:
            self.weights = np.full(ne, W_CAP)
        self._build_csr()

    def _build_csr(self):
        bnd = self.num_nodes  # virtual boundary node
        internal = self.edge_v >= 0
        h_from = np.concatenate([self.edge_u, self.edge_v[internal]])
        h_to = np.concatenate([np.where(internal, self.edge_v, bnd), self.edge_u[internal]])
        h_eid = np.concatenate([np.arange(len(self.edge_u)), np.nonzero(internal)[0]])
        order = np.argsort(h_from, kind="stable")
        self._h_from = h_from[order].astype(np.int64)
        self._h_to = h_to[order].astype(np.int64)
        self._h_eid = h_eid[order].astype(np.int64)
        self._indptr = np.zeros(self.num_nodes + 2, dtype=np.int64)
        np.add.at(self._indptr, self._h_from + 1, 1)
        np.cumsum(self._indptr, out=self._indptr)

    @property
    def num_edges(self) -> int:
        return self.edge_u.shape[0]

    def reweight(self, priors: np.ndarray, q=None) -> None:
        """Set edge probabilities from per-qubit prior 4-vectors.

        ``priors`` has shape (num_upper, 4) for code capacity or
        (rounds, num_upper, 4) under phenomenological noise, where ``q``
        (scalar or per-(round, plaquette) array) sets the time edges.
        """
        space = self.src_kind != KIND_TIME
        cols = np.zeros(self.num_edges, dtype=np.intp)
        for kind, col in _KIND_COL.items():
            cols[self.src_kind == kind] = col
        if self.rounds == 0:
            if priors.shape != (self.num_upper, 4):
                raise UsageError("prior array shape mismatch")
            base = priors[self.src_qubit[space], cols[space]]
            px = priors[self.src_qubit[space], 1]
        else:
            if priors.shape != (self.rounds, self.num_upper, 4):
                raise UsageError("prior array shape mismatch")
            base = priors[self.src_round[space], self.src_qubit[space], cols[space]]
            px = priors[self.src_round[space], self.src_qubit[space], 1]
        p = np.where(self.include_x[space], _pxor(base, px), base)
        self.probs = np.zeros(self.num_edges)
        self.probs[space] = p
        if self.rounds > 0:
            if q is None:
                raise UsageError("phenomenological graph requires q")
            tmask = ~space
            qv = np.asarray(q, dtype=float)
            if qv.ndim == 0:
                self.probs[tmask] = float(qv)
            else:
                self.probs[tmask] = qv[self.src_round[tmask], self.src_qubit[tmask]]
        self.weights = _weight_from_prob(self.probs)

    def set_probs(self, probs: np.ndarray) -> None:
        """Directly install per-edge probabilities (belief reweighting)."""
        if probs.shape != (self.num_edges,):
            raise UsageError("edge probability array shape mismatch")
        self.probs = np.asarray(probs, dtype=float)
        self.weights = _weight_from_prob(self.probs)

    def dump_edges(self) -> str:
        """Edge list in a stable text format for differential testing."""
        names = {KIND_TIME: "meas", KIND_X: "X", KIND_Y: "Y", KIND_Z: "Z"}
        lines = []
        for e in range(self.num_edges):
            v = int(self.edge_v[e])
            lines.append("{} {} {:.12g} {}:{}:{}".format(
                int(self.edge_u[e]), v if v >= 0 else "boundary",
                float(self.weights[e]), names[int(self.src_kind[e])],
                int(self.src_qubit[e]), int(self.src_round[e])))
        return "\n".join(lines) + "\n"

    def correction_bits(self, edge_ids) -> tuple[np.ndarray, np.ndarray]:
        """Upper-level (x, z) correction bits from a set of matched edges."""
        x = np.zeros(self.num_upper, dtype=np.uint8)
        z = np.zeros(self.num_upper, dtype=np.uint8)
        for e in edge_ids:
            k = self.src_kind[e]
            if k == KIND_TIME:
                continue
            u = self.src_qubit[e]
            if k in (KIND_X, KIND_Y):
                x[u] ^= 1
            if k in (KIND_Y, KIND_Z):
                z[u] ^= 1
        return x, z


def build_graph_cc(upper: StabilizerCode) -> DecoderGraph:
    """One node per face; edges from single-qubit mechanisms."""
    specs = _space_edge_specs(upper)
    eu, ev, q_, k_, r_, ix = [], [], [], [], [], []
    for det, u, kind, inc in specs:
        eu.append(det[0])
        ev.append(det[1] if len(det) == 2 else -1)
        q_.append(u)
        k_.append(kind)
        r_.append(0)
        ix.append(inc)
    return DecoderGraph(
        num_nodes=upper.num_generators, num_upper=upper.n, rounds=0,
        edge_u=np.array(eu, dtype=np.int32), edge_v=np.array(ev, dtype=np.int32),
        src_qubit=np.array(q_, dtype=np.int32), src_kind=np.array(k_, dtype=np.int8),
        src_round=np.array(r_, dtype=np.int32), include_x=np.array(ix, dtype=bool),
    )


def build_graph_phenom(upper: StabilizerCode, rounds: int) -> DecoderGraph:
    """Space edges replicated per noisy round plus time edges per detector.

    Node (g, t) has index t * G + g for layers t = 0 .. rounds; a fresh data
    error in round t flips layer-t detectors, a measurement flip in round t
    flips layers t and t + 1.
    """
    if rounds < 1:
        raise UsageError("at least one noisy round required")
    g = upper.num_generators
    specs = _space_edge_specs(upper)
    eu, ev, q_, k_, r_, ix = [], [], [], [], [], []
    for t in range(rounds):
        off = t * g
        for det, u, kind, inc in specs:
            eu.append(off + det[0])
            ev.append(off + det[1] if len(det) == 2 else -1)
            q_.append(u)
            k_.append(kind)
            r_.append(t)
            ix.append(inc)
    for t in range(rounds):
        for gg in range(g):
            eu.append(t * g + gg)
            ev.append((t + 1) * g + gg)
            q_.append(gg)
            k_.append(KIND_TIME)
            r_.append(t)
            ix.append(False)
    return DecoderGraph(
        num_nodes=(rounds + 1) * g, num_upper=upper.n, rounds=rounds,
        edge_u=np.array(eu, dtype=np.int32), edge_v=np.array(ev, dtype=np.int32),
        src_qubit=np.array(q_, dtype=np.int32), src_kind=np.array(k_, dtype=np.int8),
        src_round=np.array(r_, dtype=np.int32), include_x=np.array(ix, dtype=bool),
    )


@dataclass
class MatchResult:
    edge_ids: np.ndarray          # matched edges, multiplicity reduced mod 2
    total_weight: float
    pairs: list                   # (defect_i, defect_j or -1) node pairs


def _trace_path(graph: DecoderGraph, pred, target: int) -> list[int]:
    edges = []
    v = target
    while pred[v] >= 0:
        k = pred[v]
        edges.append(int(graph._h_eid[k]))
        v = int(graph._h_from[k])
    return edges


def _blossom_component(comp, dist, bweight, allowed):
    """Exact fallback via blossom matching on the boundary-surplus graph.

    Minimizing sum(matched pair distances) + sum(unmatched boundary costs)
    equals sum(boundary costs) minus the maximum-weight (not necessarily
    perfect) matching of w(a, b) = b_a + b_b - d(a, b) over pairs with
    positive surplus, so no twin-node doubling is needed.
    """
    import networkx as nx

    k = len(comp)
    gr = nx.Graph()
    gr.add_nodes_from(range(k))
    for a in range(k):
        for b in range(a + 1, k):
            if allowed[a, b]:
                gr.add_edge(a, b, weight=bweight[a] + bweight[b] - dist[a, b])
    mate = nx.max_weight_matching(gr)
    match = np.full(k, -1, dtype=np.int64)
    for x, y in mate:
        match[x] = y
        match[y] = x
    return match


def mwpm(graph: DecoderGraph, defects: np.ndarray) -> MatchResult:
    """Exact minimum-weight matching of ``defects`` (node indices)."""
    defects = np.asarray(defects, dtype=np.int64)
    nd = defects.shape[0]
    if nd == 0:
        return MatchResult(edge_ids=np.empty(0, dtype=np.int64), total_weight=0.0, pairs=[])

    hweight = graph.weights[graph._h_eid]
    bnd = graph.num_nodes
    dists = np.empty((nd, nd))
    bcost = np.empty(nd)
    preds = []
    for i in range(nd):
        dist, pred = _kernels.dijkstra_csr(
            graph._indptr, graph._h_to, hweight, graph._h_eid, defects[i], graph.num_nodes)
        dists[i] = dist[defects]
        bcost[i] = dist[bnd]
        preds.append(pred)
    if not np.all(np.isfinite(bcost)):
        raise ContractViolation("a defect has no path to the boundary")

    allowed = dists < (bcost[:, None] + bcost[None, :])
    np.fill_diagonal(allowed, False)

    # connected components of the allowed-pair graph
    parent = np.arange(nd)

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(nd):
        for j in range(i + 1, nd):
            if allowed[i, j]:
                parent[find(i)] = find(j)

    match = np.full(nd, -1, dtype=np.int64)
    total = 0.0
    for root in set(find(i) for i in range(nd)):
        comp = [i for i in range(nd) if find(i) == root]
        k = len(comp)
        if k == 1:
            total += bcost[comp[0]]
            continue
        sub_d = dists[np.ix_(comp, comp)].copy()
        sub_d[~allowed[np.ix_(comp, comp)]] = np.inf
        if k <= DP_MAX:
            cost, sub_match = _kernels.pairing_dp(sub_d, bcost[comp])
            total += cost
        else:
            sub_match = _blossom_component(comp, sub_d, bcost[comp], allowed[np.ix_(comp, comp)])
            for a in range(k):
                total += bcost[comp[a]] if sub_match[a] < 0 else 0.5 * sub_d[a, sub_match[a]]
        for a in range(k):
            if sub_match[a] >= 0:
                match[comp[a]] = comp[sub_match[a]]

    flip = np.zeros(graph.num_edges, dtype=np.uint8)
    pairs = []
    for i in range(nd):
        j = match[i]
        if j < 0:
            for e in _trace_path(graph, preds[i], bnd):
                flip[e] ^= 1
            pairs.append((int(defects[i]), -1))
        elif j > i:
            for e in _trace_path(graph, preds[i], int(defects[j])):
                flip[e] ^= 1
            pairs.append((int(defects[i]), int(defects[j])))
    return MatchResult(edge_ids=np.nonzero(flip)[0], total_weight=float(total), pairs=pairs)
