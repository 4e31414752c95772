"""Log-domain numerics for 1D probability densities on uniform grids.

Densities are stored as log values on a uniform grid together with a
normalization constant, so that repeated products of many copies (which
underflow catastrophically in linear space) stay exact.  Exact zeros are
represented as ``-inf`` and survive every operation.

Conventions: quadrature variance of the ground state is 1/2, integrals are
trapezoidal, and interpolation of the log density is linear between nodes.
All operations return new objects; grids are immutable.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.fft

from .errors import (
    DegenerateResult,
    InsufficientSupport,
    NegativeDensity,
    NoInteriorMaximum,
    NonUniformGrid,
    NotPowerOfTwo,
    TooFewPoints,
    WindowOutOfRange,
    ZeroMass,
)

__all__ = [
    "GridSpec",
    "GridDensity",
    "MaximumLocation",
    "make_grid_density",
    "from_log_values",
    "mean",
    "variance",
    "global_maxima",
    "curvature_at",
    "convolve_gaussian",
    "pow_scale",
    "shift",
    "log_interp",
    "read_density_csv",
    "write_density_csv",
    "MIN_NODES",
]

MIN_NODES = 64

# Input edges must stay below this fraction of the peak before an operation
# that pads the grid with exact zeros may run.
_EDGE_DECAY_GUARD = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Symmetric uniform grid on [-extent, extent]."""

    extent: float
    nodes: int = 4096

    def __post_init__(self) -> None:
        if self.extent <= 0.0:
            raise ValueError("grid extent must be positive")
        if self.nodes < MIN_NODES:
            raise TooFewPoints(f"need at least {MIN_NODES} nodes, got {self.nodes}")

    def xs(self) -> np.ndarray:
        return np.linspace(-self.extent, self.extent, self.nodes)

    @property
    def step(self) -> float:
        return 2.0 * self.extent / (self.nodes - 1)


@dataclass(frozen=True)
class GridDensity:
    """Normalized probability density sampled on a uniform grid.

    ``log_p`` holds unnormalized log values (``-inf`` for exact zeros) and
    ``norm_log`` the log of their trapezoidal integral, so the density at
    node i is ``exp(log_p[i] - norm_log)``.
    """

    x_min: float
    x_step: float
    log_p: np.ndarray
    norm_log: float
    meta: str = ""

    def __post_init__(self) -> None:
        self.log_p.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return self.log_p.shape[0]

    @property
    def x_max(self) -> float:
        return self.x_min + self.x_step * (self.n_nodes - 1)

    def xs(self) -> np.ndarray:
        return self.x_min + self.x_step * np.arange(self.n_nodes)

    def log_values(self) -> np.ndarray:
        """Normalized log density at the nodes."""
        return self.log_p - self.norm_log

    def values(self) -> np.ndarray:
        """Normalized density at the nodes."""
        return np.exp(self.log_values())


@dataclass(frozen=True)
class MaximumLocation:
    """A local maximum refined off the grid by a three-point parabola."""

    a: float
    value: float
    curvature: float
    is_global: bool


def _log_trapz(log_f: np.ndarray, step: float) -> float:
    """Log of the trapezoidal integral of exp(log_f)."""
    finite = np.isfinite(log_f)
    if not finite.any():
        return -math.inf
    w = np.full(log_f.shape[0], step)
    w[0] *= 0.5
    w[-1] *= 0.5
    m = log_f[finite].max()
    total = np.sum(np.exp(log_f[finite] - m) * w[finite])
    if total <= 0.0:
        return -math.inf
    return m + math.log(total)


def from_log_values(
    x_min: float, x_step: float, log_p: np.ndarray, meta: str = ""
) -> GridDensity:
    """Normalize raw log values into a :class:`GridDensity`."""
    log_p = np.asarray(log_p, dtype=float).copy()
    if log_p.ndim != 1 or log_p.shape[0] < MIN_NODES:
        raise TooFewPoints(f"need at least {MIN_NODES} nodes, got {log_p.shape[0]}")
    if x_step <= 0.0:
        raise NonUniformGrid("grid step must be positive")
    if np.isposinf(log_p).any() or np.isnan(log_p).any():
        raise NegativeDensity("log density must be finite or -inf")
    norm = _log_trapz(log_p, x_step)
    if not math.isfinite(norm):
        raise ZeroMass("density integrates to zero")
    return GridDensity(float(x_min), float(x_step), log_p, norm, meta)


def make_grid_density(xs: np.ndarray, ps: np.ndarray, meta: str = "") -> GridDensity:
    """Build a normalized density from sampled values.

    :param xs: strictly increasing, uniformly spaced abscissas (>= 64 of them,
        uniform to 1e-9 relative tolerance).
    :param ps: nonnegative density samples; zeros are kept exact.
    """
    xs = np.asarray(xs, dtype=float)
    ps = np.asarray(ps, dtype=float)
    if xs.ndim != 1 or xs.shape != ps.shape:
        raise NonUniformGrid("xs and ps must be 1D arrays of equal length")
    if xs.shape[0] < MIN_NODES:
        raise TooFewPoints(f"need at least {MIN_NODES} nodes, got {xs.shape[0]}")
    steps = np.diff(xs)
    h = float(np.mean(steps))
    if h <= 0.0 or np.any(steps <= 0.0):
        raise NonUniformGrid("xs must be strictly increasing")
    if np.max(np.abs(steps - h)) > 1e-9 * abs(h):
        raise NonUniformGrid("xs are not uniformly spaced")
    if np.isnan(ps).any() or np.any(ps < 0.0):
        raise NegativeDensity("density values must be nonnegative")
    with np.errstate(divide="ignore"):
        log_p = np.log(ps)
    return from_log_values(float(xs[0]), h, log_p, meta)


def mean(d: GridDensity) -> float:
    xs = d.xs()
    v = d.values()
    return float(np.trapezoid(xs * v, dx=d.x_step))


def variance(d: GridDensity) -> float:
    xs = d.xs()
    v = d.values()
    m1 = float(np.trapezoid(xs * v, dx=d.x_step))
    m2 = float(np.trapezoid(xs * xs * v, dx=d.x_step))
    return m2 - m1 * m1


def global_maxima(d: GridDensity, rel_tol: float = 1e-3) -> list[MaximumLocation]:
    """Locate all interior local maxima, parabola-refined, sorted by height.

    A maximum is flagged global when its refined value is within ``rel_tol``
    (relative) of the highest one.  Raises :class:`NoInteriorMaximum` when the
    density peaks at a grid edge.
    """
    if not 0.0 < rel_tol < 1.0:
        raise ValueError("rel_tol must lie in (0, 1)")
    v = d.values()
    n = v.shape[0]
    top = int(np.argmax(v))
    if top == 0 or top == n - 1:
        raise NoInteriorMaximum("density is maximized at a grid edge")
    inner = v[1:-1]
    is_peak = (inner > v[:-2]) & (inner >= v[2:])
    seeds = np.nonzero(is_peak)[0] + 1
    h = d.x_step
    out: list[MaximumLocation] = []
    for i in seeds:
        y1, y2, y3 = v[i - 1], v[i], v[i + 1]
        denom = y1 - 2.0 * y2 + y3
        if denom >= 0.0:
            # flat triple; keep the node itself
            out.append(MaximumLocation(d.x_min + i * h, float(y2), 0.0, False))
            continue
        delta = 0.5 * (y1 - y3) / denom
        delta = float(np.clip(delta, -1.0, 1.0))
        a = d.x_min + (i + delta) * h
        value = y2 - 0.25 * (y1 - y3) * delta
        out.append(MaximumLocation(float(a), float(value), float(denom / h**2), False))
    vmax = max(loc.value for loc in out)
    out = [
        replace(loc, is_global=loc.value >= (1.0 - rel_tol) * vmax) for loc in out
    ]
    out.sort(key=lambda loc: -loc.value)
    return out


def curvature_at(d: GridDensity, a: float, window: int = 8) -> float:
    """Second derivative of the density at ``a`` from a quartic LSQ fit.

    The fit uses ``2*window + 1`` nodes centered on the node nearest ``a``
    and reproduces exact quartics to machine precision.
    """
    if window < 5:
        raise WindowOutOfRange("window must span at least 5 nodes per side")
    j = int(round((a - d.x_min) / d.x_step))
    if j - window < 0 or j + window > d.n_nodes - 1:
        raise WindowOutOfRange(
            f"window of {window} nodes around {a!r} falls outside the grid"
        )
    idx = np.arange(j - window, j + window + 1)
    xs = d.x_min + d.x_step * idx
    s = (xs - a) / d.x_step
    y = np.exp(d.log_p[idx] - d.norm_log)
    coef = np.polynomial.polynomial.polyfit(s, y, 4)
    return float(2.0 * coef[2] / d.x_step**2)


def convolve_gaussian(d: GridDensity, var: float, meta: str | None = None) -> GridDensity:
    """Convolve with a zero-mean Gaussian of variance ``var``.

    The grid is extended so the smeared tails still decay at the edges; the
    convolution itself runs through an FFT against the exact Gaussian
    characteristic function, which preserves normalization identically.
    """
    if var < 0.0:
        raise ValueError("Gaussian variance must be nonnegative")
    if var == 0.0:
        return d
    v = d.values()
    vmax = float(v.max())
    if v[0] > _EDGE_DECAY_GUARD * vmax or v[-1] > _EDGE_DECAY_GUARD * vmax:
        raise InsufficientSupport(
            "density does not decay at the grid edges; widen the grid first"
        )
    h = d.x_step
    sigma = math.sqrt(var)
    pad = int(math.ceil(10.0 * sigma / h)) + 8
    ext = np.concatenate([np.zeros(pad), v, np.zeros(pad)])
    nfft = scipy.fft.next_fast_len(ext.shape[0] + pad)
    omega = 2.0 * math.pi * np.fft.rfftfreq(nfft, d=h)
    spec = np.fft.rfft(ext, n=nfft) * np.exp(-0.5 * var * omega**2)
    out = np.fft.irfft(spec, n=nfft)[: ext.shape[0]]
    np.clip(out, 0.0, None, out=out)
    with np.errstate(divide="ignore"):
        log_out = np.log(out)
    return from_log_values(
        d.x_min - pad * h, h, log_out, d.meta if meta is None else meta
    )


def pow_scale(d: GridDensity, copies: int) -> GridDensity:
    """Distill ``copies`` = 2**N copies: density proportional to P(x/sqrt(M))**M.

    Output nodes are the input nodes scaled by sqrt(M), so the M-fold log
    product is exact (no interpolation).  Exact zeros propagate.
    """
    if copies < 1 or (copies & (copies - 1)) != 0:
        raise NotPowerOfTwo(f"copy count must be a power of two, got {copies}")
    if copies == 1:
        return d
    r = math.sqrt(copies)
    log_new = copies * (d.log_p - d.norm_log)
    if not np.isfinite(log_new).any():
        raise DegenerateResult("all density values vanished under powering")
    try:
        return from_log_values(d.x_min * r, d.x_step * r, log_new, d.meta)
    except ZeroMass as exc:  # pragma: no cover - defensive
        raise DegenerateResult(str(exc)) from exc


def shift(d: GridDensity, offset: float) -> GridDensity:
    """Translate the density by ``offset`` (exact; only the grid origin moves)."""
    return replace(d, x_min=d.x_min + float(offset))


def log_interp(d: GridDensity, xq: np.ndarray) -> np.ndarray:
    """Normalized log density at arbitrary points.

    Linear interpolation of the log between nodes; exact zeros propagate to
    the whole adjacent open interval, and points outside the grid are zero.
    """
    xq = np.asarray(xq, dtype=float)
    t = (xq - d.x_min) / d.x_step
    n = d.n_nodes
    out = np.full(xq.shape, -math.inf)
    inside = (t >= 0.0) & (t <= n - 1)
    ti = t[inside]
    i0 = np.floor(ti).astype(int)
    np.clip(i0, 0, n - 2, out=i0)
    frac = ti - i0
    left = d.log_p[i0]
    right = d.log_p[i0 + 1]
    with np.errstate(invalid="ignore"):
        val = (1.0 - frac) * left + frac * right
    # at an exact node the neighbor's -inf must not bleed in
    on_node = frac == 0.0
    val = np.where(on_node, left, val)
    val = np.where(np.isnan(val), -math.inf, val)
    out[inside] = val - d.norm_log
    return out


def read_density_csv(path: str) -> GridDensity:
    """Load ``x,density`` rows (header optional) into a normalized density."""
    xs: list[float] = []
    ps: list[float] = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or not row[0].strip():
                continue
            try:
                x = float(row[0])
                p = float(row[1])
            except (ValueError, IndexError):
                if not xs:  # header line
                    continue
                raise
            xs.append(x)
            ps.append(p)
    return make_grid_density(np.array(xs), np.array(ps), meta=path)


def write_density_csv(d: GridDensity, path: str) -> None:
    xs = d.xs()
    v = d.values()
    with open(path, "w", newline="") as fh:
        fh.write("x,density\n")
        for x, p in zip(xs, v):
            fh.write(f"{x:.17g},{p:.17g}\n")
