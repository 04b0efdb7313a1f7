"""Teleportation-induced conversion channel from a two-mode entangled source.

Teleporting an input mode over a standard-form resource (u, v, w) with gain
kappa realizes a single-mode Gaussian channel with T = kappa I and
N = (v kappa^2 + u - 2 w kappa) I: a thermal loss channel below unit gain, a
thermal amplifier above it, and a random displacement channel at kappa = 1
whose noise variance is exactly the Duan combination u + v - 2w.
"""

from dataclasses import dataclass

import numpy as np

from .capacity import (
    BosonicChannelKind,
    RANDOM_DISPLACEMENT,
    THERMAL_AMP,
    THERMAL_LOSS,
    _g_array,
)
from .entanglement import duan_quantity
from .gaussian import check_physical
from .transducer import TwoModeStandardForm

__all__ = [
    "GainSearchResult",
    "induced_channel",
    "optimize_gain",
    "teleport_oracle",
]

# Gains within this window of 1 are classified as displacement channels; the
# loss/amplifier noise expression has a removable divergence at kappa = 1.
_UNIT_GAIN_TOL = 1e-9

GAIN_SEARCH_RANGE = (1e-3, 10.0)
_COARSE_POINTS = 400
_GOLDEN_TOL = 1e-6


def induced_channel(form: TwoModeStandardForm, kappa: float) -> BosonicChannelKind:
    """Classify the channel induced by teleporting with gain ``kappa``."""
    if kappa <= 0:
        raise ValueError("gain must be positive")
    if abs(kappa - 1.0) < _UNIT_GAIN_TOL:
        return BosonicChannelKind(RANDOM_DISPLACEMENT, 1.0, duan_quantity(form))
    noise_num = form.v * kappa**2 + form.u - 2 * form.w * kappa
    n_e = noise_num / (2.0 * abs(1.0 - kappa**2)) - 0.5
    if n_e < -1e-9:
        raise ValueError("negative effective occupation: source form is unphysical")
    kind = THERMAL_LOSS if kappa < 1.0 else THERMAL_AMP
    return BosonicChannelKind(kind, kappa**2, max(n_e, 0.0))


def _bounds_at_gains(form: TwoModeStandardForm, kappas: np.ndarray) -> np.ndarray:
    """Clamped capacity lower bound at each gain, vectorized."""
    u, v, w = form.u, form.v, form.w
    k = np.asarray(kappas, dtype=float)
    noise = v * k**2 + u - 2.0 * w * k
    out = np.zeros_like(k)
    unit = np.abs(k - 1.0) < _UNIT_GAIN_TOL
    if np.any(unit):
        sigma = noise[unit]
        good = sigma > 0
        vals = np.zeros_like(sigma)
        vals[good] = np.log2(2.0 / (np.e * sigma[good]))
        out[unit] = vals
    rest = ~unit
    if np.any(rest):
        kk = k[rest]
        denom = np.abs(1.0 - kk**2)
        n_e = np.maximum(noise[rest] / (2.0 * denom) - 0.5, 0.0)
        out[rest] = np.log2(kk**2 / denom) - _g_array(n_e)
    return np.maximum(out, 0.0)


@dataclass(frozen=True)
class GainSearchResult:
    """Outcome of optimizing the teleportation gain for capacity."""

    kappa_opt: float
    q_lb_opt: float
    channel: BosonicChannelKind


def optimize_gain(form: TwoModeStandardForm) -> GainSearchResult:
    """Maximize the induced-channel capacity lower bound over the gain.

    Coarse search on 400 log-spaced gains in [1e-3, 10] plus the seeds
    kappa = w/v (minimizer of the channel noise) and kappa = 1, followed by
    golden-section refinement of the best bracket down to 1e-6 in kappa.
    Returns the zero bound at unit gain when no gain opens the channel.
    """
    lo, hi = GAIN_SEARCH_RANGE
    grid = np.geomspace(lo, hi, _COARSE_POINTS)
    seeds = [1.0]
    if form.v > 0 and lo < form.w / form.v < hi:
        seeds.append(form.w / form.v)
    grid = np.sort(np.concatenate([grid, seeds]))
    vals = _bounds_at_gains(form, grid)
    best = int(np.argmax(vals))
    if vals[best] <= 0.0:
        return GainSearchResult(1.0, 0.0, induced_channel(form, 1.0))

    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, len(grid) - 1)]
    phi = (np.sqrt(5.0) - 1.0) / 2.0

    def f(k):
        return float(_bounds_at_gains(form, np.array([k]))[0])

    x1 = b - phi * (b - a)
    x2 = a + phi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > _GOLDEN_TOL:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + phi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - phi * (b - a)
            f1 = f(x1)
    candidates = [(f(k), k) for k in (0.5 * (a + b), *seeds, grid[best])]
    q_opt, k_opt = max(candidates)
    return GainSearchResult(float(k_opt), float(q_opt), induced_channel(form, float(k_opt)))


def _fifty_fifty_bs(n_modes: int, i: int, j: int) -> np.ndarray:
    """Symmetric 50:50 beam splitter: x_i' = (x_i + x_j)/sqrt2, x_j' = (x_i - x_j)/sqrt2."""
    s = np.eye(2 * n_modes)
    r = 1.0 / np.sqrt(2.0)
    for q in range(2):
        a, b = 2 * i + q, 2 * j + q
        s[a, a] = r
        s[a, b] = r
        s[b, a] = r
        s[b, b] = -r
    return s


def teleport_oracle(v_oe: np.ndarray, v_in: np.ndarray, kappa: float) -> np.ndarray:
    """Output covariance of the teleportation protocol, computed moment by moment.

    The pipeline is explicit: stack (source, input), mix the microwave half
    of the source with the input on a balanced beam splitter, fold the
    gain-kappa feed-forward displacement into the optical quadratures using
    the blocks t1 = kappa (I + Z)/2 and t2 = kappa (Z - I)/2 (which touch
    only the q of one beam-splitter output and the p of the other), then
    homodyne those two quadratures in the ideal limit.  The returned
    ensemble covariance is the conditional covariance plus the spread of the
    feed-forward-corrected conditional means over the outcome distribution.
    """
    v_oe = np.asarray(v_oe, dtype=float)
    v_in = np.asarray(v_in, dtype=float)
    if v_oe.shape != (4, 4) or v_in.shape != (2, 2):
        raise ValueError("expected a 4x4 source and a 2x2 input covariance")
    if kappa <= 0:
        raise ValueError("gain must be positive")
    check_physical(v_oe)
    check_physical(v_in)

    v1 = np.zeros((6, 6))
    v1[:4, :4] = v_oe
    v1[4:, 4:] = v_in
    bs = _fifty_fifty_bs(3, 1, 2)
    v2 = bs @ v1 @ bs.T

    t1 = kappa * np.diag([1.0, 0.0])
    t2 = kappa * np.diag([0.0, -1.0])
    ff = np.eye(6)
    ff[0:2, 2:4] = -np.sqrt(2.0) * t1
    ff[0:2, 4:6] = -np.sqrt(2.0) * t2
    v3 = ff @ v2 @ ff.T

    # ideal homodyne of q on the first measured mode and p on the second:
    # directions within the measured block, quadrature order (q2, p2, q3, p3)
    directions = np.zeros((4, 2))
    directions[0, 0] = 1.0
    directions[3, 1] = 1.0
    gamma_a = v3[:2, :2]
    gamma_ab = v3[:2, 2:]
    gamma_b = v3[2:, 2:]
    cw = gamma_ab @ directions
    outcome_cov = directions.T @ gamma_b @ directions
    gain_map = cw @ np.linalg.pinv(outcome_cov, rcond=1e-12)
    conditional = gamma_a - gain_map @ outcome_cov @ gain_map.T
    # feed-forward already shifted the optical quadratures, so averaging the
    # corrected conditional means over outcomes restores the full spread
    mean_spread = gain_map @ outcome_cov @ gain_map.T
    out = conditional + mean_spread
    return 0.5 * (out + out.T)
