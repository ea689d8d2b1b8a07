"""Classical information seen by moving observers.

Covers the Doppler-scaled Gaussian channel capacity, the direction-dependent
temperature of blackbody radiation, and the mutual information between the
two components of a planar velocity ensemble before and after a boost.

Velocities are in units of c. The planar ensemble is uniform on the open
unit disc: its x-marginal is the semicircle law with differential entropy
``ln(pi) - 1/2`` nats, so the rest-frame mutual information is ``ln(pi/e)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from .entropy import from_nats
from .qstate import ValidationError

LOG2E = math.log2(math.e)


def _check_beta(beta) -> np.ndarray:
    b = np.asarray(beta, dtype=float)
    if np.any(b < 0) or np.any(b >= 1):
        raise ValidationError(f"velocity fraction must lie in [0, 1), got {beta}")
    return b


def awng_capacity(W, snr, alpha=1.0):
    """Capacity ``W log2(1 + alpha SNR)`` in bits per second."""
    W, snr, alpha = (np.asarray(v, dtype=float) for v in (W, snr, alpha))
    if np.any(W < 0) or np.any(snr < 0) or np.any(alpha <= 0):
        raise ValidationError("need W >= 0, SNR >= 0 and alpha > 0")
    out = W * np.log1p(alpha * snr) / math.log(2.0)
    return float(out) if out.ndim == 0 else out


def infinite_bandwidth_capacity(snr, alpha=1.0):
    """Limit of :func:`awng_capacity` for W -> infinity at fixed total SNR.

    Here ``snr`` is the signal-to-noise ratio per unit bandwidth, so the
    finite-bandwidth channel is ``W log2(1 + alpha snr / W)``.
    """
    snr, alpha = np.asarray(snr, dtype=float), np.asarray(alpha, dtype=float)
    if np.any(snr < 0) or np.any(alpha < 0):
        raise ValidationError("need SNR >= 0 and alpha >= 0")
    out = alpha * snr * LOG2E
    return float(out) if out.ndim == 0 else out


def doppler_factor(beta, theta=math.pi):
    """Frequency ratio nu'/nu for a source seen at emission angle ``theta``.

    ``theta = pi`` is straight recession, giving sqrt((1 - beta)/(1 + beta)).
    """
    b = _check_beta(beta)
    out = np.sqrt(1.0 - b * b) / (1.0 - b * np.cos(theta))
    return float(out) if out.ndim == 0 else out


def moving_temperature(T, beta, theta_prime):
    """Blackbody temperature seen by a detector moving at ``beta`` and angle ``theta_prime``."""
    b = _check_beta(beta)
    out = np.asarray(T, dtype=float) * np.sqrt(1.0 - b * b) / (1.0 - b * np.cos(theta_prime))
    return float(out) if out.ndim == 0 else out


def no_shift_angle(beta: float) -> float:
    """Detector angle at which the moving temperature equals the rest temperature."""
    b = float(_check_beta(beta))
    if b == 0:
        return 0.0
    return math.acos((1.0 - math.sqrt(1.0 - b * b)) / b)


def temperature_anisotropy(T: float, beta: float) -> tuple[float, float, bool]:
    """Hottest and coldest apparent temperatures and whether they differ."""
    t_max = moving_temperature(T, beta, 0.0)
    t_min = moving_temperature(T, beta, math.pi)
    return t_max, t_min, not math.isclose(t_max, t_min, rel_tol=1e-12, abs_tol=0.0)


def stream_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator keyed by (seed, stream)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(stream)])))


@dataclass(frozen=True, eq=False)
class VelocityEnsemble:
    """Planar velocity samples in units of c, shape (n, 2)."""

    v: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValidationError(f"expected (n, 2) velocity samples, got {v.shape}")
        if np.any(np.einsum("ij,ij->i", v, v) >= 1.0):
            raise ValidationError("all speeds must be below c")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.v.shape[0]


MIN_ENSEMBLE = 1000


def sample_bounded_planar_ensemble(n: int, seed: int, chunk: int = 1 << 18) -> VelocityEnsemble:
    """Draw ``n`` velocities uniformly from the open unit disc.

    Samples are generated in fixed-size chunks, each from its own stream, so
    the result depends only on ``(n, seed)``.
    """
    if n < MIN_ENSEMBLE:
        raise ValidationError(f"need at least {MIN_ENSEMBLE} samples, got {n}")
    parts = []
    for i, start in enumerate(range(0, n, chunk)):
        m = min(chunk, n - start)
        u = stream_rng(seed, i).random((m, 2))
        r = np.sqrt(u[:, 0])
        phi = 2.0 * math.pi * u[:, 1]
        parts.append(np.column_stack((r * np.cos(phi), r * np.sin(phi))))
    return VelocityEnsemble(np.concatenate(parts), seed)


def boost_velocities(v: np.ndarray, beta: float) -> np.ndarray:
    """Relativistic velocity addition for a frame moving at ``beta`` along x.

    Negative ``beta`` boosts the other way; |beta| < 1 is required.
    """
    if not -1.0 < beta < 1.0:
        raise ValidationError(f"boost velocity must satisfy |beta| < 1, got {beta}")
    v = np.asarray(v, dtype=float)
    den = 1.0 - beta * v[:, 0]
    vx = (v[:, 0] - beta) / den
    vy = v[:, 1] * math.sqrt(1.0 - beta * beta) / den
    return np.column_stack((vx, vy))


def boost_ensemble(e: VelocityEnsemble, beta: float) -> VelocityEnsemble:
    return VelocityEnsemble(boost_velocities(e.v, beta), e.seed)


def _ksg_terms(x: np.ndarray, y: np.ndarray, k: int) -> np.ndarray:
    """Per-sample contributions of the Kraskov-Stoegbauer-Grassberger estimator (nats)."""
    n = x.size
    pts = np.column_stack((x, y))
    # query in cell order: same distances, far fewer cache misses
    lo, span = pts.min(axis=0), np.ptp(pts, axis=0)
    cell = np.floor(255.0 * (pts - lo) / np.where(span > 0, span, 1.0)).astype(np.int64)
    order = np.lexsort((cell[:, 1], cell[:, 0]))
    eps = np.empty(n)
    eps[order] = cKDTree(pts).query(pts[order], k=k + 1, p=np.inf)[0][:, -1]
    # strictly inside the max-norm ball, excluding the point itself
    nx, ny = _strict_counts(x, eps), _strict_counts(y, eps)
    return digamma(k) + digamma(n) - digamma(nx + 1) - digamma(ny + 1)


def _strict_counts(x: np.ndarray, eps: np.ndarray) -> np.ndarray:
    # searching in sorted order keeps the lookups cache friendly
    order = np.argsort(x)
    xs, e = x[order], eps[order]
    counts = np.empty(x.size, dtype=np.int64)
    counts[order] = np.searchsorted(xs, xs + e, "left") - np.searchsorted(xs, xs - e, "right") - 1
    return counts


def ksg_mutual_information(x, y, k: int = 4, halving: bool = True) -> tuple[float, float]:
    """kNN mutual-information estimate and its standard error (nats).

    The error combines the standard error of the mean of the per-sample terms
    (what a bootstrap over those terms converges to) with, when
    ``halving`` is set, a finite-sample bias estimate: the estimator is rerun
    on the two interleaved halves and the shift is extrapolated assuming the
    bias decays as ``n^-1/2`` (the rate set by sharp support edges).
    """
    x, y = np.asarray(x, float), np.asarray(y, float)
    terms = _ksg_terms(x, y, k)
    value = float(terms.mean())
    stat = float(terms.std(ddof=1)) / math.sqrt(terms.size)
    if not halving:
        return value, stat
    half = 0.5 * sum(_ksg_terms(x[i::2], y[i::2], k).mean() for i in (0, 1))
    systematic = abs(value - half) / (math.sqrt(2.0) - 1.0)
    return value, math.hypot(stat, systematic)


def _rank_bins(x: np.ndarray, bins: int) -> np.ndarray:
    return (np.argsort(np.argsort(x, kind="stable"), kind="stable") * bins) // x.size


def _mm_mi(counts: np.ndarray) -> float:
    """Plug-in MI of a count table with the Miller-Madow correction (nats)."""
    n = counts.sum()

    def h(c):
        c = c[c > 0]
        p = c / n
        return -np.sum(p * np.log(p)) + (c.size - 1) / (2.0 * n)

    return float(h(counts.sum(axis=1)) + h(counts.sum(axis=0)) - h(counts.ravel()))


def histogram_mutual_information(x, y, bins: int | None = None, n_boot: int = 100, seed: int = 0):
    """Equal-mass histogram MI with Miller-Madow correction (nats).

    Returns ``(value, stderr)``. The error combines a multinomial bootstrap of
    the count table with the change in the estimate when the grid is halved,
    which bounds the discretization bias of the coarse-grained table.
    """
    x, y = np.asarray(x, float), np.asarray(y, float)
    n = x.size
    if bins is None:
        bins = max(10, int(math.sqrt(n) / 2.5))
    bins -= bins % 2
    bx, by = _rank_bins(x, bins), _rank_bins(y, bins)
    counts = np.bincount(bx * bins + by, minlength=bins * bins).reshape(bins, bins)
    value = _mm_mi(counts)
    coarse = counts.reshape(bins // 2, 2, bins // 2, 2).sum(axis=(1, 3))
    systematic = abs(value - _mm_mi(coarse))
    rng = stream_rng(seed, 1 << 21)
    p = (counts / n).ravel()
    boots = [_mm_mi(rng.multinomial(n, p).reshape(bins, bins)) for _ in range(n_boot)]
    stat = float(np.std(boots, ddof=1))
    return value, math.hypot(stat, systematic)


@dataclass(frozen=True)
class MIEstimate:
    """kNN estimate (primary) alongside the histogram estimate, in the requested unit."""

    value: float
    stderr: float
    histogram_value: float
    histogram_stderr: float

    @property
    def estimators_agree(self) -> bool:
        gap = abs(self.value - self.histogram_value)
        return gap <= 3.0 * math.hypot(self.stderr, self.histogram_stderr)


def planar_mutual_information(
    e: VelocityEnsemble,
    k: int = 4,
    bins: int | None = None,
    n_boot: int = 100,
    unit="nats",
) -> MIEstimate:
    """Mutual information between v_x and v_y of an ensemble.

    The value reported is the kNN estimate; the histogram estimate is carried
    along as a second opinion.

    Parameters
    ----------
    k : int
        Neighbour order of the kNN estimator.
    bins, n_boot : int
        Histogram grid size per axis (default ``sqrt(n)/2.5``) and number of
        multinomial bootstrap replicates for its error bar.
    """
    if e.n < 10_000:
        raise ValidationError(f"need at least 10^4 samples, got {e.n}")
    vx, vy = e.v[:, 0], e.v[:, 1]
    if np.ptp(vx) == 0 or np.ptp(vy) == 0:
        raise ValidationError("degenerate ensemble: a velocity component is constant")
    seed = 0 if e.seed is None else e.seed
    value, se = ksg_mutual_information(vx, vy, k=k)
    hv, hse = histogram_mutual_information(vx, vy, bins=bins, n_boot=n_boot, seed=seed)
    return MIEstimate(
        from_nats(value, unit), from_nats(se, unit), from_nats(hv, unit), from_nats(hse, unit)
    )


REST_FRAME_MI = math.log(math.pi / math.e)
