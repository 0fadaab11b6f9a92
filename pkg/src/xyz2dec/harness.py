"""Monte Carlo harness: failure-rate estimation and threshold fits.

Every shot draws from its own counter-based RNG substream keyed by
(seed, point id, shot index), so failure counts are identical for any
worker count or shot partitioning.  Results serialize to CSV and fits to
JSON with fixed 12-significant-digit formatting, making outputs
byte-stable.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import curve_fit

from . import __version__
from .errors import FitFailure, UsageError
from .noise import channel_from_bias, shot_rng
from .pipeline import DECODERS, MODELS, ShotDecoder

Z95 = 1.959963984540054


@dataclass(frozen=True)
class RunConfig:
    """One grid point: code distance, channel, noise model, decoder."""

    d: int
    p: float
    eta: float
    model: str = "code-capacity"
    decoder: str = "matching"
    q: float | None = None          # None -> q = p (phenomenological only)
    rounds: int | None = None       # None -> d
    bp_iterations: int | None = None  # None -> d

    def __post_init__(self):
        if self.model not in MODELS:
            raise UsageError(f"unknown model {self.model!r}")
        if self.decoder not in DECODERS:
            raise UsageError(f"unknown decoder {self.decoder!r}")
        if self.decoder == "mld" and self.d > 3:
            raise UsageError("mld decoding is restricted to d <= 3")

    @property
    def resolved_q(self) -> float | None:
        if self.model != "phenomenological":
            return None
        return self.p if self.q is None else self.q

    @property
    def resolved_rounds(self) -> int | None:
        if self.model != "phenomenological":
            return None
        return self.d if self.rounds is None else self.rounds

    def point_id(self) -> int:
        """Stable identifier used to key the per-shot RNG substreams."""
        key = json.dumps([self.d, repr(self.p), repr(self.eta), self.model,
                          self.decoder, repr(self.resolved_q), self.resolved_rounds,
                          self.bp_iterations])
        return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "big")


@dataclass
class ExperimentResult:
    config: RunConfig
    shots: int
    seed: int
    failures: int
    p_f: float
    ci_low: float
    ci_high: float


def wilson_interval(failures: int, shots: int, z: float = Z95) -> tuple[float, float]:
    if shots <= 0:
        raise UsageError("shots must be positive")
    ph = failures / shots
    denom = 1.0 + z * z / shots
    center = (ph + z * z / (2 * shots)) / denom
    half = (z / denom) * math.sqrt(ph * (1 - ph) / shots + z * z / (4 * shots * shots))
    # the interval always contains the point estimate; rounding can push the
    # bounds a few ulp past it at the extremes, so clamp against ph too
    return min(max(0.0, center - half), ph), max(min(1.0, center + half), ph)


def _make_decoder(config: RunConfig) -> ShotDecoder:
    channel = channel_from_bias(config.p, config.eta)
    return ShotDecoder(config.d, config.decoder, config.model, channel,
                       q=config.resolved_q, rounds=config.resolved_rounds,
                       bp_iterations=config.bp_iterations)


def _run_chunk(config: RunConfig, seed: int, start: int, stop: int) -> int:
    dec = _make_decoder(config)
    pid = config.point_id()
    failures = 0
    for shot in range(start, stop):
        if dec.run_shot(shot_rng(seed, pid, shot)) != "I":
            failures += 1
    return failures


def run_point(config: RunConfig, shots: int, seed: int, workers: int = 1) -> ExperimentResult:
    """Estimate the logical failure rate at one grid point.

    The failure count is a deterministic function of (config, shots, seed),
    independent of ``workers``.
    """
    if shots <= 0:
        raise UsageError("shots must be positive")
    if workers <= 1 or shots < 2 * workers:
        failures = _run_chunk(config, seed, 0, shots)
    else:
        bounds = np.linspace(0, shots, workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_run_chunk, config, seed, int(a), int(b))
                    for a, b in zip(bounds[:-1], bounds[1:])]
            failures = sum(f.result() for f in futs)
    lo, hi = wilson_interval(failures, shots)
    return ExperimentResult(config=config, shots=shots, seed=seed, failures=failures,
                            p_f=failures / shots, ci_low=lo, ci_high=hi)


# ---------------------------------------------------------------------------
# Threshold fits: P_f = A + B x + C x^2 with x = (p - p_th) d^(1/nu).

@dataclass
class ThresholdFit:
    p_th: float
    sigma: float
    nu: float
    a: float
    b: float
    c: float
    window: tuple[float, float]
    distances: tuple[int, ...]
    rms_residual: float

    def to_json_dict(self) -> dict:
        return {
            "p_th": self.p_th, "sigma": self.sigma, "nu": self.nu,
            "A": self.a, "B": self.b, "C": self.c,
            "window": list(self.window), "distances": list(self.distances),
            "rms_residual": self.rms_residual,
        }


def fit_threshold(results: list[ExperimentResult],
                  window: tuple[float, float] | None = None) -> ThresholdFit:
    """Finite-size-scaling fit over a (d, p) grid of failure rates."""
    if window is not None:
        results = [r for r in results if window[0] <= r.config.p <= window[1]]
    ds = sorted({r.config.d for r in results})
    ps = sorted({r.config.p for r in results})
    if len(ds) < 3:
        raise FitFailure("need at least 3 distances")
    if len(ps) < 5:
        raise FitFailure("need at least 5 p-values")
    table = {(r.config.d, r.config.p): r for r in results}
    missing = [(d, p) for d in ds for p in ps if (d, p) not in table]
    if missing:
        raise FitFailure(f"grid is incomplete: missing {missing[:3]}...")

    # a crossing requires the distance ordering to flip across the window
    lo_gap = table[(ds[-1], ps[0])].p_f - table[(ds[0], ps[0])].p_f
    hi_gap = table[(ds[-1], ps[-1])].p_f - table[(ds[0], ps[-1])].p_f
    if not (lo_gap < 0.0 < hi_gap):
        raise FitFailure(
            f"no visible crossing in window [{ps[0]:.6g}, {ps[-1]:.6g}]: "
            f"distance gap {lo_gap:.4g} at low p, {hi_gap:.4g} at high p")

    dd = np.array([d for d in ds for _ in ps], dtype=float)
    pp = np.array([p for _ in ds for p in ps], dtype=float)
    yy = np.array([table[(d, p)].p_f for d in ds for p in ps])
    se = np.array([max(1e-4, math.sqrt(max(r.p_f * (1 - r.p_f), 1e-9) / r.shots))
                   for d in ds for p in ps for r in [table[(d, p)]]])

    def ansatz(x, p_th, nu, a, b, c):
        p_, d_ = x
        u = (p_ - p_th) * d_ ** (1.0 / nu)
        return a + b * u + c * u * u

    # initial threshold guess: p with the smallest spread across distances
    spread = [np.ptp([table[(d, p)].p_f for d in ds]) for p in ps]
    p0 = [ps[int(np.argmin(spread))], 1.5, float(np.mean(yy)), 1.0, 0.0]
    try:
        popt, pcov = curve_fit(ansatz, (pp, dd), yy, p0=p0, sigma=se,
                               absolute_sigma=True, maxfev=20000)
    except RuntimeError as exc:
        raise FitFailure(f"least-squares fit did not converge: {exc}") from exc
    sigma = float(np.sqrt(pcov[0, 0]))
    if not np.isfinite(sigma) or sigma <= 0:
        raise FitFailure("fit covariance is singular")
    resid = yy - ansatz((pp, dd), *popt)
    return ThresholdFit(p_th=float(popt[0]), sigma=sigma, nu=float(popt[1]),
                        a=float(popt[2]), b=float(popt[3]), c=float(popt[4]),
                        window=(ps[0], ps[-1]), distances=tuple(ds),
                        rms_residual=float(np.sqrt(np.mean(resid ** 2))))


# ---------------------------------------------------------------------------
# Persistence: CSV for scan results, JSON for fits.

CSV_FIELDS = ["model", "decoder", "d", "p", "eta", "q", "rounds",
              "shots", "seed", "failures", "P_f", "ci_low", "ci_high"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return format(x, ".12g")
    return str(x)


def results_to_csv(results: list[ExperimentResult], header_extra: list[str] | None = None) -> str:
    lines = [f"# xyz2dec {__version__} scan results"]
    for extra in header_extra or []:
        lines.append(f"# {extra}")
    lines.append(",".join(CSV_FIELDS))
    for r in results:
        c = r.config
        row = [c.model, c.decoder, c.d, float(c.p), float(c.eta),
               c.resolved_q if c.resolved_q is None else float(c.resolved_q),
               c.resolved_rounds, r.shots, r.seed, r.failures,
               float(r.p_f), float(r.ci_low), float(r.ci_high)]
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_results_csv(path: str, results: list[ExperimentResult],
                      header_extra: list[str] | None = None) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(results_to_csv(results, header_extra))


def read_results_csv(path: str) -> list[ExperimentResult]:
    out = []
    with open(path) as fh:
        rows = [ln for ln in fh if not ln.startswith("#")]
    for rec in csv.DictReader(rows):
        cfg = RunConfig(
            d=int(rec["d"]), p=float(rec["p"]), eta=float(rec["eta"]),
            model=rec["model"], decoder=rec["decoder"],
            q=float(rec["q"]) if rec["q"] else None,
            rounds=int(rec["rounds"]) if rec["rounds"] else None,
        )
        out.append(ExperimentResult(
            config=cfg, shots=int(rec["shots"]), seed=int(rec["seed"]),
            failures=int(rec["failures"]), p_f=float(rec["P_f"]),
            ci_low=float(rec["ci_low"]), ci_high=float(rec["ci_high"])))
    return out


def write_fit_json(path: str, fit: ThresholdFit, source: str | None = None) -> None:
    doc = {"version": __version__, "kind": "threshold-fit"}
    if source:
        doc["source"] = source
    doc.update(fit.to_json_dict())
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
