"""Path-loss and fading channel primitives.

Gain factor of an eta-power path-loss link, average received SNR per symbol,
the SNR densities of Rayleigh/Rician fading, and their Laplace transforms
(moment generating functions) used to average exponential error bounds in
closed form.

All quantities are linear (dB conversion happens once at the config
boundary, see :func:`db_to_linear`).  Everything here is a pure function of
immutable inputs and safe for unsynchronized concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import i0e

from .errors import ConfigError, UnsupportedFadingError

RAYLEIGH = "rayleigh"
RICIAN = "rician"
AWGN = "awgn"


def db_to_linear(x_db: float) -> float:
    """Convert a dB power ratio to linear: 10**(x_db/10)."""
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Convert a linear power ratio to dB: 10*log10(x)."""
    if x <= 0.0:
        raise ValueError(f"dB conversion requires a positive ratio, got {x}")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class LinkBudget:
    """Distance, path-loss law and noise parameters of a single link.

    Attributes
    ----------
    distance_m : transmitter-receiver separation in meters (> 0)
    path_loss_exponent : power-law exponent eta of the channel
    gain_margin : linear margin covering hardware variations and background
        noise (> 0)
    reference_gain : linear gain factor at 1 m, folding antenna gains and
        wavelength (> 0)
    noise_psd : noise power spectral density in W/Hz (> 0)
    """

    distance_m: float
    path_loss_exponent: float
    gain_margin: float
    reference_gain: float
    noise_psd: float

    def __post_init__(self) -> None:
        if self.distance_m <= 0.0:
            raise ConfigError(f"distance_m must be > 0, got {self.distance_m}")
        if self.gain_margin <= 0.0:
            raise ConfigError(f"gain_margin must be > 0, got {self.gain_margin}")
        if self.reference_gain <= 0.0:
            raise ConfigError(f"reference_gain must be > 0, got {self.reference_gain}")
        if self.noise_psd <= 0.0:
            raise ConfigError(f"noise_psd must be > 0, got {self.noise_psd}")


@dataclass(frozen=True)
class FadingModel:
    """Flat-fading channel model with mean-square gain ``omega``.

    ``kind`` is one of ``rayleigh``, ``rician`` or ``awgn``.  ``k`` is the
    linear Rician factor (LOS-to-diffuse power ratio); it is 0 for Rayleigh
    and meaningless for AWGN.  A Rician model with k == 0 is distribution
    identical to Rayleigh and is treated as such everywhere.
    """

    kind: str
    omega: float = 1.0
    k: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in (RAYLEIGH, RICIAN, AWGN):
            raise ConfigError(f"unknown fading kind {self.kind!r}")
        if self.omega <= 0.0:
            raise ConfigError(f"omega must be > 0, got {self.omega}")
        if self.k < 0.0:
            raise ConfigError(f"Rician factor must be >= 0, got {self.k}")
        if self.kind != RICIAN and self.k != 0.0:
            raise ConfigError("k is only meaningful for Rician fading")

    @classmethod
    def rayleigh(cls, omega: float = 1.0) -> "FadingModel":
        return cls(RAYLEIGH, omega)

    @classmethod
    def rician(cls, k: float, omega: float = 1.0) -> "FadingModel":
        return cls(RICIAN, omega, k)

    @classmethod
    def awgn(cls, omega: float = 1.0) -> "FadingModel":
        return cls(AWGN, omega)

    @property
    def is_rayleigh_like(self) -> bool:
        """True for Rayleigh or the distribution-identical Rician k == 0."""
        return self.kind == RAYLEIGH or (self.kind == RICIAN and self.k == 0.0)

    def describe(self) -> str:
        if self.kind == RICIAN:
            return f"rician(k={self.k:g},omega={self.omega:g})"
        return f"{self.kind}(omega={self.omega:g})"


def path_gain(lb: LinkBudget) -> float:
    """Transmit-to-receive power ratio M_l * d**eta * L_1 of the link."""
    gain = lb.gain_margin * lb.distance_m ** lb.path_loss_exponent * lb.reference_gain
    if not math.isfinite(gain):
        raise ConfigError(f"path gain overflows for d={lb.distance_m}")
    return gain


def avg_snr(lb: LinkBudget, fading: FadingModel, symbol_energy_j: float) -> float:
    """Average received SNR (omega / L_d) * E_t / N_0 for a symbol energy."""
    if symbol_energy_j < 0.0:
        raise ValueError(f"symbol energy must be >= 0, got {symbol_energy_j}")
    return fading.omega / path_gain(lb) * symbol_energy_j / lb.noise_psd


def snr_pdf(fading: FadingModel, gamma_bar: float, gamma: float) -> float:
    """Density of the instantaneous SNR at ``gamma`` given mean ``gamma_bar``.

    Rayleigh: exponential with mean gamma_bar.  Rician: noncentral
    chi-square with 2 degrees of freedom induced by the Rician amplitude,

        f(g) = (1+K)/gbar * exp(-K - (1+K) g / gbar) * I0(2 sqrt(K (1+K) g / gbar)),

    evaluated with the exponentially scaled Bessel function so large
    arguments cannot overflow.  AWGN has a degenerate (point mass) SNR and
    no density; asking for one raises :class:`UnsupportedFadingError`.
    """
    if gamma < 0.0:
        raise ValueError(f"SNR must be >= 0, got {gamma}")
    if gamma_bar <= 0.0:
        raise ValueError(f"mean SNR must be > 0, got {gamma_bar}")
    if fading.kind == AWGN:
        raise UnsupportedFadingError("AWGN SNR is deterministic and has no density")
    if fading.is_rayleigh_like:
        return math.exp(-gamma / gamma_bar) / gamma_bar
    k = fading.k
    arg = 2.0 * math.sqrt(k * (1.0 + k) * gamma / gamma_bar)
    # exp(-K - (1+K)g/gbar + arg) = exp(-(sqrt(K) - sqrt((1+K)g/gbar))**2) <= 1
    expo = -k - (1.0 + k) * gamma / gamma_bar + arg
    return (1.0 + k) / gamma_bar * math.exp(expo) * i0e(arg)


def fading_mgf(fading: FadingModel, gamma_bar: float, s: float) -> float:
    """E[exp(-s * gamma)] over the fading SNR distribution.

    Closed-form Laplace transform of :func:`snr_pdf`:
    Rayleigh 1/(1 + s gbar); Rician
    (1+K)/(1+K+s gbar) * exp(-K s gbar / (1+K+s gbar)); AWGN exp(-s gbar).
    """
    if s < 0.0:
        raise ValueError(f"transform variable must be >= 0, got {s}")
    if gamma_bar < 0.0:
        raise ValueError(f"mean SNR must be >= 0, got {gamma_bar}")
    if fading.kind == AWGN:
        return math.exp(-s * gamma_bar)
    if fading.is_rayleigh_like:
        return 1.0 / (1.0 + s * gamma_bar)
    k = fading.k
    denom = 1.0 + k + s * gamma_bar
    return (1.0 + k) / denom * math.exp(-k * s * gamma_bar / denom)
