"""Numerical machinery: root finding, energy inversion, sweeps and optima.

The sweep evaluates the energy model over a (scheme, M, distance, K) grid
with deterministic declaration-order iteration; per-cell failures are
recorded in the row and never abort the grid.  Constellation search picks
the feasible M with the lowest total energy, breaking ties toward the
smaller (simpler) constellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Mapping

from .errors import (
    BracketError,
    ConfigError,
    GreenlinkError,
    NoFeasibleConstellationError,
    NumericalError,
)
from .linkbudget import RICIAN, FadingModel, LinkBudget, db_to_linear, linear_to_db
from .schemes import (
    M_CONSTRAINED,
    SchemeConfig,
    SchemeId,
    CircuitProfile,
    bandwidth_efficiency,
    max_constellation,
    total_energy,
)


@dataclass(frozen=True)
class RootSpec:
    """Bracket and tolerances for bisection."""

    lo: float
    hi: float
    rel_tol: float = 1e-9
    max_iter: int = 200

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ConfigError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.rel_tol <= 0.0:
            raise ConfigError(f"rel_tol must be > 0, got {self.rel_tol}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {self.max_iter}")


def bisect(f: Callable[[float], float], spec: RootSpec) -> float:
    """Deterministic bisection of a sign change on [lo, hi]."""
    lo, hi = spec.lo, spec.hi
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo:g}, {fhi:g}")
    for _ in range(spec.max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo <= spec.rel_tol * max(abs(mid), 1e-300):
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, flo):
            lo, flo = mid, fm
        else:
            hi = mid
    raise NumericalError(f"bisection did not converge in {spec.max_iter} iterations")


def invert_monotone(
    residual: Callable[[float], float],
    guess: float,
    target: float,
    rel_tol: float = 1e-9,
    max_iter: int = 400,
) -> float:
    """Root of a decreasing residual(x) = bound(x) - target, x > 0.

    Starts from a bracket of [guess/1e3, guess*1e3] and widens it
    geometrically (up to 1e6x on either side) until the sign change is
    captured, then bisects in log-x until |residual| <= rel_tol * target.
    """
    guess = max(guess, 1e-12)
    lo, hi = guess * 1e-3, guess * 1e3
    widen = 0
    while residual(lo) < 0.0:
        lo /= 10.0
        widen += 1
        if widen > 6:
            raise BracketError(f"no lower bracket for target {target:g}")
    widen = 0
    while residual(hi) > 0.0:
        hi *= 10.0
        widen += 1
        if widen > 6:
            raise BracketError(f"no upper bracket for target {target:g}")
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi)
        r = residual(mid)
        if abs(r) <= rel_tol * target:
            return mid
        if r > 0.0:
            lo = mid
        else:
            hi = mid
    raise NumericalError(f"energy inversion did not converge in {max_iter} iterations")


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepSpec:
    """Grid axes plus the fixed baselines each cell is derived from.

    Axes iterate in declaration order: scheme, M, distance, K.  ``configs``
    and ``circuits`` carry one baseline per swept scheme (constellation and
    distance are overridden cell by cell).  A ``k_db_values`` axis replaces
    the baseline fading with Rician(K) per cell; ``None`` keeps the
    baseline fading for every cell.
    """

    schemes: tuple[SchemeId, ...]
    m_values: tuple[int, ...]
    distances_m: tuple[float, ...]
    k_db_values: tuple[float, ...] | None
    configs: Mapping[SchemeId, SchemeConfig]
    link: LinkBudget
    fading: FadingModel
    circuits: Mapping[SchemeId, CircuitProfile]

    def __post_init__(self) -> None:
        if not self.schemes:
            raise ConfigError("sweep needs at least one scheme")
        if not self.m_values:
            raise ConfigError("sweep needs a non-empty M axis")
        if not self.distances_m:
            raise ConfigError("sweep needs a non-empty distance axis")
        if self.k_db_values is not None and not self.k_db_values:
            raise ConfigError("k_db axis, when given, must be non-empty")
        for d in self.distances_m:
            if d <= 0.0:
                raise ConfigError(f"distances must be > 0, got {d}")
        for s in self.schemes:
            if s not in self.configs or s not in self.circuits:
                raise ConfigError(f"missing baseline config/circuit for {s.value}")


@dataclass(frozen=True)
class SweepRow:
    """One grid cell: inputs, energy decomposition and feasibility."""

    scheme: SchemeId
    m: int
    d_m: float
    k_db: float | None
    fading_desc: str
    target_ser: float
    t_ac_s: float | None
    e_t_j: float | None
    e_tx_j: float | None
    e_circ_j: float | None
    e_trans_j: float | None
    e_total_j: float | None
    feasible: bool
    error: str | None = None


@dataclass(frozen=True)
class OptimumReport:
    """Result of the discrete constellation search at one distance."""

    best_m: int
    best_total_j: float
    rows: tuple[SweepRow, ...]
    feasible_mask: tuple[bool, ...]


def _effective_m_axis(scheme: SchemeId, m_values: tuple[int, ...]) -> tuple[int, ...]:
    """Per-scheme M axis: fixed-rate schemes collapse, MQAM keeps powers of 4."""
    if scheme in (SchemeId.DOQPSK, SchemeId.OOK):
        return (2,)
    if scheme == SchemeId.MQAM:
        ms = tuple(m for m in m_values if m >= 4 and (m & (m - 1)) == 0 and (m.bit_length() - 1) % 2 == 0)
    else:
        ms = tuple(m for m in m_values if m >= 2 and (m & (m - 1)) == 0)
    if not ms:
        raise ConfigError(f"M axis {m_values} has no valid sizes for {scheme.value}")
    return ms


def _cell_fading(spec: SweepSpec, k_db: float | None) -> tuple[FadingModel, float | None]:
    """Cell fading plus the K value (dB) its report row should carry."""
    if k_db is not None:
        return FadingModel.rician(db_to_linear(k_db), spec.fading.omega), k_db
    fading = spec.fading
    if fading.kind == RICIAN and fading.k > 0.0:
        return fading, linear_to_db(fading.k)
    return fading, None


def sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate the energy model on every grid cell, in declaration order."""
    rows: list[SweepRow] = []
    k_axis: tuple[float | None, ...] = spec.k_db_values if spec.k_db_values is not None else (None,)
    for scheme in spec.schemes:
        base = spec.configs[scheme]
        circuit = spec.circuits[scheme]
        for m in _effective_m_axis(scheme, spec.m_values):
            cfg = replace(base, m=m)
            for d in spec.distances_m:
                lb = replace(spec.link, distance_m=d)
                for k_db in k_axis:
                    fading, row_k_db = _cell_fading(spec, k_db)
                    try:
                        bd = total_energy(cfg, lb, fading, circuit)
                        rows.append(
                            SweepRow(
                                scheme=scheme,
                                m=m,
                                d_m=d,
                                k_db=row_k_db,
                                fading_desc=fading.describe(),
                                target_ser=cfg.target_ser,
                                t_ac_s=bd.t_active_s,
                                e_t_j=bd.symbol_energy_j,
                                e_tx_j=bd.transmit_j,
                                e_circ_j=bd.circuit_j,
                                e_trans_j=bd.transient_j,
                                e_total_j=bd.total_j,
                                feasible=bd.feasible,
                            )
                        )
                    except GreenlinkError as exc:
                        rows.append(
                            SweepRow(
                                scheme=scheme,
                                m=m,
                                d_m=d,
                                k_db=row_k_db,
                                fading_desc=fading.describe(),
                                target_ser=cfg.target_ser,
                                t_ac_s=None,
                                e_t_j=None,
                                e_tx_j=None,
                                e_circ_j=None,
                                e_trans_j=None,
                                e_total_j=None,
                                feasible=False,
                                error=f"{type(exc).__name__}: {exc}",
                            )
                        )
    return rows


def optimal_m(spec: SweepSpec) -> OptimumReport:
    """Exhaustive search for the energy-minimizing constellation size.

    Requires a single-scheme, single-distance, single-fading spec.  For the
    frame-constrained schemes the candidate axis is truncated at M_max;
    the argmin runs over the feasible cells with ties broken toward the
    smaller M.
    """
    if len(spec.schemes) != 1 or len(spec.distances_m) != 1:
        raise ConfigError("optimal_m needs exactly one scheme and one distance")
    if spec.k_db_values is not None and len(spec.k_db_values) != 1:
        raise ConfigError("optimal_m needs a single fading condition")
    scheme = spec.schemes[0]
    candidates = _effective_m_axis(scheme, spec.m_values)
    if scheme in M_CONSTRAINED:
        _, m_max = max_constellation(spec.configs[scheme])
        capped = tuple(m for m in candidates if m <= m_max)
        candidates = capped if capped else candidates
    search = replace(spec, m_values=candidates)
    rows = tuple(sweep(search))
    mask = tuple(r.feasible and r.error is None for r in rows)
    usable = [r for r, ok in zip(rows, mask) if ok]
    if not usable:
        raise NoFeasibleConstellationError(
            f"no feasible constellation for {scheme.value} among {candidates}"
        )
    best = min(usable, key=lambda r: (r.e_total_j, r.m))
    return OptimumReport(
        best_m=best.m, best_total_j=best.e_total_j, rows=rows, feasible_mask=mask
    )


@dataclass(frozen=True)
class BeffRow:
    """NC-MFSK energy keyed by bandwidth efficiency."""

    m: int
    b_eff: float
    d_m: float
    e_total_j: float


def energy_vs_bandwidth_efficiency(spec: SweepSpec) -> list[BeffRow]:
    """NC-MFSK total energy tabulated against bandwidth efficiency."""
    if tuple(spec.schemes) != (SchemeId.NC_MFSK,):
        raise ConfigError("energy_vs_bandwidth_efficiency applies to NC-MFSK only")
    out = []
    for row in sweep(spec):
        if row.error is not None:
            raise NumericalError(f"cell (M={row.m}, d={row.d_m}) failed: {row.error}")
        out.append(
            BeffRow(
                m=row.m,
                b_eff=bandwidth_efficiency(SchemeId.NC_MFSK, row.m),
                d_m=row.d_m,
                e_total_j=row.e_total_j,
            )
        )
    return out
