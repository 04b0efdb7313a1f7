"""Quantum-capacity lower bounds for single-mode bosonic channels."""

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianChannelSpec
from .transducer import TransducerParams, _dqt_eta_ne, _require

__all__ = [
    "BosonicChannelKind",
    "FrequencyQuadrature",
    "g_function",
    "q_lb_loss_amp",
    "coherent_info_loss_amp",
    "q_lb_displacement",
    "coherent_info_displacement",
    "q_lb_for_channel",
    "dqt_capacity_boundary",
    "q_lb_bandwidth_integrated",
]

THERMAL_LOSS = "thermal_loss"
THERMAL_AMP = "thermal_amplification"
RANDOM_DISPLACEMENT = "random_displacement"

_KINDS = (THERMAL_LOSS, THERMAL_AMP, RANDOM_DISPLACEMENT)


@dataclass(frozen=True)
class BosonicChannelKind:
    """One of the three single-mode channel families.

    ``eta`` is the transmissivity (< 1 loss, > 1 amplification, = 1
    displacement) and ``noise`` holds the thermal occupation n_e for
    loss/amplification or the variance sigma^2 for displacement.
    """

    kind: str
    eta: float
    noise: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.noise < 0:
            raise ValueError("noise must be nonnegative")
        if self.kind == THERMAL_LOSS and not self.eta < 1.0 + 1e-9:
            raise ValueError("thermal loss requires eta <= 1")
        if self.kind == THERMAL_AMP and not self.eta > 1.0 - 1e-9:
            raise ValueError("thermal amplification requires eta >= 1")
        if self.kind == RANDOM_DISPLACEMENT and abs(self.eta - 1.0) > 1e-9:
            raise ValueError("random displacement requires eta = 1")

    def to_gaussian_channel(self) -> GaussianChannelSpec:
        if self.kind == RANDOM_DISPLACEMENT:
            return GaussianChannelSpec(T=np.eye(2), N=self.noise * np.eye(2))
        t = np.sqrt(self.eta) * np.eye(2)
        n = abs(1.0 - self.eta) * (2.0 * self.noise + 1.0) * np.eye(2)
        return GaussianChannelSpec(T=t, N=n)


def g_function(x: float) -> float:
    """Bosonic entropy g(x) = (x+1) log2(x+1) - x log2(x), with g(0) = 0."""
    if x < 0:
        raise ValueError("mean photon number must be nonnegative")
    if x == 0:
        return 0.0
    return float((x + 1.0) * np.log2(x + 1.0) - x * np.log2(x))


def _g_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    xp = x[pos]
    out[pos] = (xp + 1.0) * np.log2(xp + 1.0) - xp * np.log2(xp)
    return out


def coherent_info_loss_amp(eta: float, n_e: float) -> float:
    """Unclamped coherent-information bound log2(eta/|1-eta|) - g(n_e)."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    if abs(eta - 1.0) < 1e-12:
        raise ValueError("eta = 1 is the displacement channel; use its bound")
    if n_e < 0:
        raise ValueError("n_e must be nonnegative")
    return float(np.log2(eta / abs(1.0 - eta)) - g_function(n_e))


def q_lb_loss_amp(eta: float, n_e: float) -> float:
    """Capacity lower bound of a thermal loss or amplification channel (bits)."""
    return max(0.0, coherent_info_loss_amp(eta, n_e))


def coherent_info_displacement(sigma_sq: float) -> float:
    """Unclamped achievable rate log2(2 / (e sigma^2)) of grid-state encoding."""
    if sigma_sq <= 0:
        raise ValueError("sigma^2 must be positive")
    return float(np.log2(2.0 / (np.e * sigma_sq)))


def q_lb_displacement(sigma_sq: float) -> float:
    """Capacity lower bound of the random displacement channel (bits)."""
    return max(0.0, coherent_info_displacement(sigma_sq))


def q_lb_for_channel(ch: BosonicChannelKind) -> float:
    """Dispatch the matching lower bound for a classified channel."""
    if ch.kind == RANDOM_DISPLACEMENT:
        if ch.noise == 0:
            return math.inf
        return q_lb_displacement(ch.noise)
    return q_lb_loss_amp(ch.eta, ch.noise)


def dqt_capacity_boundary(zeta_o: float, zeta_e: float) -> float:
    """Least cooperativity product C_om * C_em allowing positive DQT capacity.

    Returns (1 / (2 sqrt(2 zeta_o zeta_e) - 2))^2; when
    zeta_o * zeta_e <= 1/2 the efficiency can never exceed 1/2 and the
    boundary is infinite (returned as math.inf).
    """
    if not 0 < zeta_o <= 1 or not 0 < zeta_e <= 1:
        raise ValueError("extraction ratios must lie in (0, 1]")
    root = 2.0 * np.sqrt(2.0 * zeta_o * zeta_e)
    if root <= 2.0:
        return math.inf
    return float((1.0 / (root - 2.0)) ** 2)


@dataclass(frozen=True)
class FrequencyQuadrature:
    """Policy for frequency integrals of spectral quantities.

    The window is [-omega_max_factor * max(kappa), +same]; the trapezoid grid
    is doubled until the relative change drops below rel_tol.
    """

    omega_max_factor: float = 10.0
    rel_tol: float = 1e-6
    initial_points: int = 257
    max_doublings: int = 12

    def window(self, p: TransducerParams) -> float:
        return self.omega_max_factor * max(p.kappa_o, p.kappa_e, p.kappa_m)


DEFAULT_QUADRATURE = FrequencyQuadrature()


def integrate_spectrum(fn, omega_max: float, quad: FrequencyQuadrature) -> float:
    """Adaptive trapezoid of a vectorized spectral function on [-W, W]."""
    n = quad.initial_points
    prev = None
    total = 0.0
    for _ in range(quad.max_doublings + 1):
        omegas = np.linspace(-omega_max, omega_max, n)
        total = float(np.trapezoid(fn(omegas), omegas))
        if prev is not None:
            if total == 0.0 and prev == 0.0:
                return 0.0
            if abs(total - prev) <= quad.rel_tol * abs(total):
                return total
        prev = total
        n = 2 * n - 1
    return total


def q_lb_bandwidth_integrated(
    p: TransducerParams, quad: FrequencyQuadrature = DEFAULT_QUADRATURE
) -> float:
    """Frequency-integrated capacity rate of the direct conversion channel.

    Integrates max{0, log2(eta/(1-eta)) - g(n_e)} over the frequency window,
    using the conversion channel at each offset; the result scales linearly
    with the overall rate unit, i.e. it is a rate in ebits per second when
    the decay rates are in rad/s.
    """
    _require(p, "red")

    def integrand(omegas):
        eta, n_e = _dqt_eta_ne(p, omegas)
        out = np.zeros_like(eta)
        open_ch = eta > 0.5
        if np.any(open_ch):
            e, ne = eta[open_ch], n_e[open_ch]
            out[open_ch] = np.maximum(0.0, np.log2(e / (1.0 - e)) - _g_array(ne))
        return out

    return integrate_spectrum(integrand, quad.window(p), quad)
