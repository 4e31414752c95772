"""Monte Carlo simulation of the physical interference-and-postselect protocol.

The deterministic pipeline computes conditioned densities directly; this
module actually runs the protocol on random samples, so the two routes check
each other.  Each layer mixes sample pairs on a balanced beamsplitter, keeps
the sum port, and postselects the difference port inside a finite window
around the conditioning value.  Exact-point conditioning has probability
zero, so the window width ``eps`` is the price of a physical realization and
its bias is what the comparison measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .density import GridDensity
from .errors import NoAcceptedSamples, PreconditionError, TooFewSamples

__all__ = [
    "ProtocolRun",
    "sample_density",
    "simulate_protocol",
    "ks_distance",
    "MAX_PROTOCOL_LAYERS",
]

MAX_PROTOCOL_LAYERS = 4
_SQRT2 = math.sqrt(2.0)
_DEFAULT_BATCH = 1 << 17


@dataclass(frozen=True)
class ProtocolRun:
    """Outcome of a simulated run: surviving samples plus bookkeeping.

    ``attempted`` counts full protocol attempts (2^N input samples each),
    so ``acceptance_rate`` is the per-attempt success probability.
    """

    samples_out: np.ndarray
    accepted: int
    attempted: int
    window_eps: float
    seed: int
    ks_vs_deterministic: float | None = field(default=None)

    def __post_init__(self) -> None:
        self.samples_out.setflags(write=False)
        if self.accepted > self.attempted:
            raise PreconditionError("accepted exceeds attempted")

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.attempted if self.attempted else 0.0

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "attempted": self.attempted,
            "acceptance_rate": self.acceptance_rate,
            "ks_vs_deterministic": self.ks_vs_deterministic,
            "window_eps": self.window_eps,
            "seed": self.seed,
        }


def _cdf_nodes(p: GridDensity) -> tuple[np.ndarray, np.ndarray]:
    xs = p.xs()
    vals = p.values()
    increments = 0.5 * (vals[1:] + vals[:-1]) * p.x_step
    cdf = np.concatenate(([0.0], np.cumsum(increments)))
    cdf /= cdf[-1]
    return xs, cdf


def sample_density(p: GridDensity, count: int, seed: int) -> np.ndarray:
    """Draw i.i.d. samples by inverse transform on the trapezoid CDF."""
    if count < 1:
        raise PreconditionError("count must be at least 1")
    xs, cdf = _cdf_nodes(p)
    rng = np.random.default_rng(seed)
    return np.interp(rng.random(count), cdf, xs)


def simulate_protocol(
    p: GridDensity,
    layers: int,
    xbar: float = 0.0,
    eps: float = 0.02,
    batches: int = 64,
    seed: int = 0,
    batch_size: int = _DEFAULT_BATCH,
) -> ProtocolRun:
    """Run the N-layer conditioned interference protocol on samples of ``p``.

    Within a batch every layer is pooled: all pairs of the surviving
    population interfere at once.  Survival of each pair is independent of
    every other pair, so pooling leaves both the output distribution and the
    expected acceptance rate identical to attempt-by-attempt simulation while
    the batch runs as a handful of array operations.  Batches derive
    independent streams from (seed, batch index), making serial and parallel
    execution agree sample for sample.
    """
    if not 1 <= layers <= MAX_PROTOCOL_LAYERS:
        raise PreconditionError(
            f"layers must be in [1, {MAX_PROTOCOL_LAYERS}], got {layers}"
        )
    if not eps > 0.0:
        raise PreconditionError("window eps must be positive")
    if batches < 1 or batch_size < (1 << layers):
        raise PreconditionError("need at least one batch of 2^layers samples")
    xs, cdf = _cdf_nodes(p)
    per_attempt = 1 << layers
    kept: list[np.ndarray] = []
    attempted = 0
    for index in range(batches):
        rng = np.random.default_rng([seed, index])
        pool = np.interp(rng.random(batch_size), cdf, xs)
        attempted += batch_size // per_attempt
        for _ in range(layers):
            if pool.size < 2:
                pool = pool[:0]
                break
            if pool.size % 2:
                pool = pool[:-1]
            a = pool[0::2]
            b = pool[1::2]
            keep = np.abs((a - b) / _SQRT2 - xbar) <= eps
            pool = ((a + b) / _SQRT2)[keep]
        kept.append(pool)
    samples = np.concatenate(kept)
    if samples.size == 0:
        raise NoAcceptedSamples(
            f"no attempt survived {layers} layers at eps={eps:g}"
        )
    return ProtocolRun(
        samples_out=samples,
        accepted=int(samples.size),
        attempted=attempted,
        window_eps=eps,
        seed=seed,
    )


def ks_distance(samples: np.ndarray, p: GridDensity) -> float:
    """Two-sided Kolmogorov-Smirnov statistic against the density's CDF."""
    s = np.sort(np.asarray(samples, dtype=float))
    n = s.size
    if n < 100:
        raise TooFewSamples(f"need at least 100 samples, got {n}")
    xs, cdf = _cdf_nodes(p)
    model = np.interp(s, xs, cdf, left=0.0, right=1.0)
    ranks = np.arange(1, n + 1) / n
    return float(max(np.max(ranks - model), np.max(model - (ranks - 1.0 / n))))
