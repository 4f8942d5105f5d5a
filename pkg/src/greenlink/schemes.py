"""Per-scheme analytic energy models.

For each of the six modulation schemes (noncoherent MFSK, coherent MFSK,
square MQAM, differential OQPSK, OOK, M-ary PPM) this module provides
bandwidth efficiency, active-mode duration, conditional and fading-averaged
symbol error rate, inversion of the averaged-SER bound into the required
per-symbol transmit energy, circuit power aggregation, and the total
per-frame energy breakdown of transmitting an N-bit payload.

Every averaged-SER upper bound is treated as an equality when inverting for
energy, so all transmit energies are conservative (worst-case) estimates.
Any probability expression exceeding 1 is clamped to 1 before use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import (
    ConfigError,
    InfeasibleTargetError,
    NoFeasibleConstellationError,
    UnsupportedFadingError,
)
from .linkbudget import FadingModel, LinkBudget, avg_snr, fading_mgf, path_gain


class SchemeId(Enum):
    NC_MFSK = "ncmfsk"
    COHERENT_MFSK = "coherent_mfsk"
    MQAM = "mqam"
    DOQPSK = "doqpsk"
    OOK = "ook"
    MPPM = "mppm"


#: schemes whose constellation size is a free parameter
VARIABLE_M = frozenset({SchemeId.NC_MFSK, SchemeId.COHERENT_MFSK, SchemeId.MQAM, SchemeId.MPPM})
#: schemes with a frame-budget constraint on M (active time grows with M)
M_CONSTRAINED = frozenset({SchemeId.NC_MFSK, SchemeId.COHERENT_MFSK, SchemeId.MPPM})
#: ultra-wideband schemes (pulse based, no sinusoidal carrier)
UWB_SCHEMES = frozenset({SchemeId.OOK, SchemeId.MPPM})

_SQRT2 = math.sqrt(2.0)
_DOQPSK_AMP = math.sqrt((1.0 + _SQRT2) / 2.0)
_DOQPSK_RATE = (2.0 - _SQRT2) / 4.0


class AveragingMethod(Enum):
    MGF_BOUND = "mgf_bound"
    QUADRATURE_EXACT = "quadrature_exact"


def carrier_separation_factor(scheme: SchemeId) -> int:
    """Minimum FSK tone-spacing divisor: 2 coherent, 1 noncoherent."""
    if scheme == SchemeId.COHERENT_MFSK:
        return 2
    if scheme == SchemeId.NC_MFSK:
        return 1
    raise ConfigError(f"carrier separation factor is undefined for {scheme.value}")


def _is_pow2(m: int) -> bool:
    return m >= 2 and (m & (m - 1)) == 0


def validate_m(scheme: SchemeId, m: int) -> None:
    if not isinstance(m, int) or not _is_pow2(m):
        raise ConfigError(f"constellation size must be a power of 2 >= 2, got {m}")
    if scheme == SchemeId.MQAM and (m.bit_length() - 1) % 2 != 0:
        raise ConfigError(f"MQAM constellation size must be a power of 4, got {m}")
    if scheme in (SchemeId.DOQPSK, SchemeId.OOK) and m != 2:
        raise ConfigError(f"{scheme.value} is fixed-rate; m must be 2, got {m}")


@dataclass(frozen=True)
class SchemeConfig:
    """One scheme instance: constellation, payload and frame timing."""

    scheme: SchemeId
    m: int
    payload_bits: int
    bandwidth_hz: float
    frame_period_s: float
    transient_s: float
    target_ser: float
    ook_duty: float = 0.5

    def __post_init__(self) -> None:
        validate_m(self.scheme, self.m)
        if self.payload_bits <= 0:
            raise ConfigError(f"payload_bits must be > 0, got {self.payload_bits}")
        if self.bandwidth_hz <= 0.0:
            raise ConfigError(f"bandwidth_hz must be > 0, got {self.bandwidth_hz}")
        if self.frame_period_s <= 0.0:
            raise ConfigError(f"frame_period_s must be > 0, got {self.frame_period_s}")
        if not 0.0 <= self.transient_s < self.frame_period_s:
            raise ConfigError(
                f"transient_s must be in [0, frame_period), got {self.transient_s}"
            )
        if not 0.0 < self.target_ser < 1.0:
            raise ConfigError(f"target_ser must be in (0, 1), got {self.target_ser}")
        if not 0.0 < self.ook_duty <= 1.0:
            raise ConfigError(f"ook_duty must be in (0, 1], got {self.ook_duty}")

    @property
    def bits_per_symbol(self) -> int:
        return self.m.bit_length() - 1


@dataclass(frozen=True)
class CircuitProfile:
    """Power draw of the transceiver blocks, watts, plus the amplifier rule.

    Blocks a scheme does not use simply keep a zero draw.  ``alpha_fixed``
    is the class-B power amplifier overhead used by every scheme except
    MQAM (whose alpha depends on the constellation).
    """

    p_sy: float = 0.0  # frequency synthesizer
    p_filt_tx: float = 0.0  # transmit filter
    p_filt_rx: float = 0.0  # receive filter (per branch where M-scaled)
    p_lna: float = 0.0  # low-noise amplifier
    p_ed: float = 0.0  # envelope detector (per branch where M-scaled)
    p_ifa: float = 0.0  # intermediate-frequency amplifier
    p_adc: float = 0.0
    p_dac: float = 0.0
    p_mix: float = 0.0  # mixer
    p_pg: float = 0.0  # UWB pulse generator
    p_int: float = 0.0  # integrator
    alpha_fixed: float = 0.33

    def __post_init__(self) -> None:
        for name in (
            "p_sy", "p_filt_tx", "p_filt_rx", "p_lna", "p_ed", "p_ifa",
            "p_adc", "p_dac", "p_mix", "p_pg", "p_int",
        ):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ConfigError(f"{name} must be finite and >= 0, got {v}")

    @classmethod
    def passband(cls) -> "CircuitProfile":
        """Reference pass-band transceiver block powers."""
        return cls(
            p_sy=10e-3, p_filt_tx=2.5e-3, p_filt_rx=2.5e-3, p_lna=9e-3,
            p_ed=3e-3, p_ifa=3e-3, p_adc=7e-3, p_dac=7e-3, p_mix=7e-3,
        )

    @classmethod
    def uwb(cls) -> "CircuitProfile":
        """Reference UWB transceiver block powers."""
        return cls(
            p_filt_tx=2.5e-3, p_filt_rx=2.5e-3, p_lna=3.1e-3, p_ed=3e-3,
            p_adc=7e-3, p_pg=675e-6, p_int=3e-3,
        )

    @classmethod
    def default_for(cls, scheme: SchemeId) -> "CircuitProfile":
        return cls.uwb() if scheme in UWB_SCHEMES else cls.passband()


class CircuitPower(NamedTuple):
    """Amplifier-free circuit draw split into transmitter and receiver."""

    tx_w: float
    rx_w: float

    @property
    def total_w(self) -> float:
        return self.tx_w + self.rx_w


@dataclass(frozen=True)
class EnergyBreakdown:
    """Per-frame energy decomposition for an N-bit payload."""

    t_active_s: float
    symbol_energy_j: float
    transmit_j: float
    circuit_j: float
    transient_j: float
    total_j: float = field(init=False)
    feasible: bool
    gamma_bar_required: float

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "total_j", self.transmit_j + self.circuit_j + self.transient_j
        )


# ---------------------------------------------------------------------------
# rate and timing


def bandwidth_efficiency(scheme: SchemeId, m: int, ook_duty: float = 0.5) -> float:
    """Data rate over channel bandwidth, bits/s/Hz."""
    validate_m(scheme, m)
    b = m.bit_length() - 1
    if scheme == SchemeId.NC_MFSK:
        return b / m
    if scheme == SchemeId.COHERENT_MFSK:
        return 2.0 * b / m
    if scheme == SchemeId.MQAM:
        return 2.0 * b
    if scheme == SchemeId.DOQPSK:
        return 2.0
    if scheme == SchemeId.OOK:
        return ook_duty
    return b / m  # MPPM


def active_duration(cfg: SchemeConfig) -> float:
    """Seconds spent modulating the N-bit payload in one frame."""
    n = cfg.payload_bits
    bw = cfg.bandwidth_hz
    b = cfg.bits_per_symbol
    s = cfg.scheme
    if s == SchemeId.NC_MFSK:
        return cfg.m * n / (bw * b)
    if s == SchemeId.COHERENT_MFSK:
        return cfg.m * n / (2.0 * bw * b)
    if s == SchemeId.MQAM:
        return n / (2.0 * bw * b)
    if s == SchemeId.DOQPSK:
        return n / (2.0 * bw)
    if s == SchemeId.OOK:
        return n / (cfg.ook_duty * bw)
    return cfg.m * n / (bw * b)  # MPPM: N/b symbols of M pulse slots each


# ---------------------------------------------------------------------------
# error rates


def conditional_ser(scheme: SchemeId, m: int, gamma: float) -> float:
    """Symbol error probability conditioned on the instantaneous SNR.

    NC-MFSK and M-PPM share the exact M-ary orthogonal noncoherent law;
    coherent MFSK uses 64-node Gauss-Hermite quadrature of its exact
    integral; MQAM is the exact two-term Q-function expression; DOQPSK is
    the two-bit-observation Marcum-Q expression (the model adopted here);
    OOK is the noncoherent envelope-detection bound 0.5 exp(-g/2).
    """
    if gamma < 0.0:
        raise ValueError(f"SNR must be >= 0, got {gamma}")
    validate_m(scheme, m)
    return float(conditional_ser_array(scheme, m, np.array([gamma]))[0])


def conditional_ser_array(scheme: SchemeId, m: int, gammas: np.ndarray) -> np.ndarray:
    """Vectorized :func:`conditional_ser` over an SNR sample array."""
    if scheme in (SchemeId.NC_MFSK, SchemeId.MPPM):
        return _kernels.orth_ser(gammas, m)
    if scheme == SchemeId.COHERENT_MFSK:
        return _kernels.coh_mfsk_ser(gammas, m)
    if scheme == SchemeId.MQAM:
        return _kernels.mqam_ser(gammas, m)
    if scheme == SchemeId.DOQPSK:
        return _kernels.doqpsk_ser(gammas)
    return _kernels.ook_ser(gammas)


def _require_rayleigh(fading: FadingModel | None, op: str) -> None:
    if fading is not None and not fading.is_rayleigh_like:
        raise UnsupportedFadingError(f"{op} is a Rayleigh-only closed form")


def avg_ser_closed(
    scheme: SchemeId, m: int, gamma_bar: float, fading: FadingModel | None = None
) -> float:
    """Closed-form Rayleigh-averaged SER bound, clamped to <= 1.

    These are the expressions the energy inversion treats as equalities.
    ``fading``, when given, must be Rayleigh (or Rician with K = 0).
    """
    _require_rayleigh(fading, "avg_ser_closed")
    validate_m(scheme, m)
    if gamma_bar < 0.0:
        raise ValueError(f"mean SNR must be >= 0, got {gamma_bar}")
    if scheme == SchemeId.NC_MFSK:
        # 1 - (1 - 1/(2+gbar))^(M-1), via expm1/log1p for large gbar
        val = -math.expm1((m - 1) * math.log1p(-1.0 / (2.0 + gamma_bar)))
    elif scheme in (SchemeId.COHERENT_MFSK, SchemeId.MPPM):
        val = (m - 1) / (gamma_bar + 2.0)
    elif scheme == SchemeId.MQAM:
        val = 4.0 * (m - 1) / (3.0 * gamma_bar + 2.0 * (m - 1)) * (1.0 - 1.0 / math.sqrt(m))
    elif scheme == SchemeId.DOQPSK:
        val = _DOQPSK_AMP * 4.0 / ((2.0 - _SQRT2) * gamma_bar + 4.0)
    else:  # OOK (average BER)
        val = 1.0 / (gamma_bar + 2.0)
    return min(1.0, val)


def _mgf_bound_params(scheme: SchemeId, m: int) -> tuple[float, float]:
    """(c, s) of the exponential conditional bound c * exp(-s * gamma)."""
    if scheme in (SchemeId.NC_MFSK, SchemeId.COHERENT_MFSK, SchemeId.MPPM):
        return (m - 1) / 2.0, 0.5
    if scheme == SchemeId.MQAM:
        return 2.0 * (1.0 - 1.0 / math.sqrt(m)), 1.5 / (m - 1.0)
    if scheme == SchemeId.DOQPSK:
        return _DOQPSK_AMP, _DOQPSK_RATE
    return 0.5, 0.5  # OOK


def avg_ser_general(
    scheme: SchemeId,
    m: int,
    fading: FadingModel,
    gamma_bar: float,
    method: AveragingMethod = AveragingMethod.MGF_BOUND,
) -> float:
    """Fading-averaged SER for any channel model.

    MGF_BOUND averages the exponential-type conditional bound in closed
    form through the fading MGF (this is the path energy inversion uses
    under Rician/AWGN).  QUADRATURE_EXACT integrates the exact conditional
    SER against the SNR density.
    """
    validate_m(scheme, m)
    if gamma_bar < 0.0:
        raise ValueError(f"mean SNR must be >= 0, got {gamma_bar}")
    if method == AveragingMethod.MGF_BOUND:
        c, s = _mgf_bound_params(scheme, m)
        return min(1.0, c * fading_mgf(fading, gamma_bar, s))
    from .montecarlo import quad_avg_ser  # runtime import avoids a module cycle

    return quad_avg_ser(scheme, m, fading, gamma_bar)


# ---------------------------------------------------------------------------
# energy inversion


def _rayleigh_required_gamma(scheme: SchemeId, m: int, target: float) -> float:
    """Mean SNR at which the Rayleigh closed-form bound equals the target."""
    if scheme == SchemeId.NC_MFSK:
        # invert 1-(1-1/(2+g))^(M-1) = P  ->  g = 1/(1-(1-P)^(1/(M-1))) - 2
        frac = -math.expm1(math.log1p(-target) / (m - 1))
        gamma = 1.0 / frac - 2.0
    elif scheme in (SchemeId.COHERENT_MFSK, SchemeId.MPPM):
        gamma = (m - 1) / target - 2.0
    elif scheme == SchemeId.MQAM:
        gamma = (
            2.0 * (m - 1) / 3.0 * (2.0 * (1.0 - 1.0 / math.sqrt(m)) / target - 1.0)
        )
    elif scheme == SchemeId.DOQPSK:
        gamma = (4.0 * _DOQPSK_AMP / target - 4.0) / (2.0 - _SQRT2)
    else:  # OOK, target interpreted as bit error rate
        gamma = 1.0 / target - 2.0
    if gamma < 0.0:
        raise InfeasibleTargetError(
            f"target {target} for {scheme.value} M={m} is looser than the zero-SNR bound"
        )
    return gamma


def _mgf_required_gamma(scheme: SchemeId, m: int, fading: FadingModel, target: float) -> float:
    """Bisect the MGF-averaged bound to the target error rate."""
    from .solver import invert_monotone  # runtime import avoids a module cycle

    c, s = _mgf_bound_params(scheme, m)
    if c <= target:
        raise InfeasibleTargetError(
            f"target {target} for {scheme.value} M={m} is looser than the zero-SNR bound"
        )
    guess = _rayleigh_required_gamma(scheme, m, target)

    def residual(gamma_bar: float) -> float:
        return c * fading_mgf(fading, gamma_bar, s) - target

    return invert_monotone(residual, guess, target)


def required_symbol_energy(cfg: SchemeConfig, lb: LinkBudget, fading: FadingModel) -> float:
    """Transmit energy per symbol that meets the target error rate.

    Rayleigh (and the distribution-identical Rician K = 0): exact inversion
    of the closed-form bound.  Rician K > 0 and AWGN: bisection on the
    MGF-averaged bound to a relative residual of 1e-9.
    """
    if fading.is_rayleigh_like:
        gamma = _rayleigh_required_gamma(cfg.scheme, cfg.m, cfg.target_ser)
    else:
        gamma = _mgf_required_gamma(cfg.scheme, cfg.m, fading, cfg.target_ser)
    return gamma * path_gain(lb) * lb.noise_psd / fading.omega


# ---------------------------------------------------------------------------
# circuit and total energy


def amplifier_alpha(scheme: SchemeId, m: int, alpha_fixed: float = 0.33) -> float:
    """Power amplifier overhead factor P_amp = alpha * P_t."""
    validate_m(scheme, m)
    if scheme == SchemeId.MQAM:
        xi = 3.0 * (math.sqrt(m) - 1.0) / (math.sqrt(m) + 1.0)
        return xi / 0.35 - 1.0
    return alpha_fixed


def circuit_power(scheme: SchemeId, m: int, profile: CircuitProfile) -> CircuitPower:
    """Amplifier-free circuit draw of sensor (tx) and sink (rx) circuitry.

    Receiver banks that replicate per branch (matched filters, envelope
    detectors, coherent branch synthesizers/mixers) scale with M.
    """
    validate_m(scheme, m)
    p = profile
    if scheme == SchemeId.NC_MFSK:
        tx = p.p_sy + p.p_filt_tx
        rx = p.p_lna + m * (p.p_filt_rx + p.p_ed) + p.p_ifa + p.p_adc
    elif scheme == SchemeId.COHERENT_MFSK:
        tx = p.p_sy + p.p_filt_tx
        rx = p.p_lna + m * (p.p_sy + p.p_mix + p.p_filt_rx) + p.p_ifa + p.p_adc
    elif scheme in (SchemeId.MQAM, SchemeId.DOQPSK):
        tx = p.p_dac + p.p_sy + p.p_mix + p.p_filt_tx
        rx = p.p_lna + p.p_mix + p.p_sy + p.p_filt_rx + p.p_ifa + p.p_adc
    elif scheme == SchemeId.OOK:
        tx = p.p_pg + p.p_filt_tx
        rx = p.p_lna + p.p_ed + p.p_filt_rx + p.p_int + p.p_adc
    else:  # MPPM
        tx = p.p_pg + p.p_filt_tx
        rx = p.p_lna + m * (p.p_ed + p.p_filt_rx) + p.p_adc
    return CircuitPower(tx, rx)


def _transient_energy(scheme: SchemeId, profile: CircuitProfile, transient_s: float) -> float:
    if scheme in (SchemeId.NC_MFSK, SchemeId.COHERENT_MFSK):
        return 1.75 * profile.p_sy * transient_s
    if scheme in (SchemeId.MQAM, SchemeId.DOQPSK):
        return 2.0 * profile.p_sy * transient_s
    return 2.0 * profile.p_pg * transient_s  # pulse generator settles for UWB


def _ook_energy_terms(
    cfg: SchemeConfig,
    lb: LinkBudget,
    fading: FadingModel,
    profile: CircuitProfile,
    ones_count: float,
) -> tuple[float, float, float, float, float]:
    """OOK per-frame terms for a given number of transmitted '1' pulses."""
    e_t = required_symbol_energy(cfg, lb, fading)
    alpha = amplifier_alpha(cfg.scheme, cfg.m, profile.alpha_fixed)
    cp = circuit_power(cfg.scheme, cfg.m, profile)
    t_ac = active_duration(cfg)
    transmit = (1.0 + alpha) * e_t * ones_count
    # filter and PA run only during the pulses; rx chain and pulse generator
    # stay on for the whole active window
    circuit = (cp.rx_w + profile.p_pg) * t_ac + ones_count / cfg.bandwidth_hz * profile.p_filt_tx
    transient = _transient_energy(cfg.scheme, profile, cfg.transient_s)
    return e_t, t_ac, transmit, circuit, transient


def total_energy(
    cfg: SchemeConfig, lb: LinkBudget, fading: FadingModel, profile: CircuitProfile
) -> EnergyBreakdown:
    """Total per-frame energy of transmitting the N-bit payload.

    Transmit term: (1 + alpha) * E_t * (symbols per frame), with OOK using
    the expected N/2 pulse count.  Circuit term: the scheme's block draws
    over their actual on-times.  Transient term: synthesizer (pass-band) or
    pulse-generator (UWB) settling.  ``feasible`` records whether the
    active window fits the frame: T_ac <= T_N - T_tr.
    """
    scheme = cfg.scheme
    n = cfg.payload_bits
    if scheme == SchemeId.OOK:
        e_t, t_ac, transmit, circuit, transient = _ook_energy_terms(
            cfg, lb, fading, profile, n / 2.0
        )
    else:
        e_t = required_symbol_energy(cfg, lb, fading)
        alpha = amplifier_alpha(scheme, cfg.m, profile.alpha_fixed)
        cp = circuit_power(scheme, cfg.m, profile)
        t_ac = active_duration(cfg)
        if scheme == SchemeId.DOQPSK:
            symbols = n / 2.0
        else:
            symbols = n / cfg.bits_per_symbol
        transmit = (1.0 + alpha) * e_t * symbols
        if scheme == SchemeId.MPPM:
            # transmitter blocks are on only for one pulse slot per symbol
            tx_on = n / (cfg.bandwidth_hz * cfg.bits_per_symbol)
            circuit = cp.tx_w * tx_on + cp.rx_w * t_ac
        else:
            circuit = cp.total_w * t_ac
        transient = _transient_energy(scheme, profile, cfg.transient_s)
    gamma_req = avg_snr(lb, fading, e_t)
    return EnergyBreakdown(
        t_active_s=t_ac,
        symbol_energy_j=e_t,
        transmit_j=transmit,
        circuit_j=circuit,
        transient_j=transient,
        feasible=t_ac <= cfg.frame_period_s - cfg.transient_s,
        gamma_bar_required=gamma_req,
    )


def ook_total_energy_sampled(
    cfg: SchemeConfig,
    lb: LinkBudget,
    fading: FadingModel,
    profile: CircuitProfile,
    l: int,
) -> float:
    """OOK frame energy for a payload containing exactly ``l`` one-bits.

    Evaluating at l = N/2 reproduces :func:`total_energy` exactly (same
    floating-point path); averaging over l ~ Binomial(N, 1/2) recovers it
    in expectation.
    """
    if cfg.scheme != SchemeId.OOK:
        raise ConfigError(f"ook_total_energy_sampled needs an OOK config, got {cfg.scheme.value}")
    if not 0 <= l <= cfg.payload_bits:
        raise ValueError(f"ones count must be in [0, {cfg.payload_bits}], got {l}")
    _, _, transmit, circuit, transient = _ook_energy_terms(cfg, lb, fading, profile, float(l))
    return transmit + circuit + transient


def max_constellation(cfg: SchemeConfig) -> tuple[int, int]:
    """Largest (b, M = 2**b) whose active window fits the frame budget.

    Solves 2**b / (zeta b) <= (B/N) (T_N - T_tr) over integers, i.e. the
    floor solution of the frame-time constraint for the schemes whose
    active duration grows with M.
    """
    if cfg.scheme not in M_CONSTRAINED:
        raise ConfigError(
            f"max_constellation applies to MFSK/MPPM only, got {cfg.scheme.value}"
        )
    zeta = 1 if cfg.scheme == SchemeId.MPPM else carrier_separation_factor(cfg.scheme)
    budget = cfg.bandwidth_hz / cfg.payload_bits * (cfg.frame_period_s - cfg.transient_s)
    b_max = 0
    for b in range(1, 64):
        if 2**b / (zeta * b) <= budget:
            b_max = b
    if b_max == 0:
        raise NoFeasibleConstellationError(
            f"even M=2 exceeds the frame budget ({budget:g} symbol slots per bit)"
        )
    return b_max, 2**b_max
