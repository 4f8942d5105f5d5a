"""greenlink: energy-efficiency models for sensor-node modulation schemes.

Computes the per-frame energy of six modulation schemes (noncoherent and
coherent MFSK, square MQAM, differential OQPSK, OOK, M-ary PPM) over
path-loss links with Rayleigh/Rician fading, solves constellation-size
constraints, searches for energy-optimal configurations, and verifies
every analytic bound against quadrature and seeded Monte Carlo.
"""

from .errors import (
    BracketError,
    ConfigError,
    GreenlinkError,
    InfeasibleTargetError,
    NoFeasibleConstellationError,
    NumericalError,
    UnsupportedFadingError,
)
from .linkbudget import (
    FadingModel,
    LinkBudget,
    avg_snr,
    db_to_linear,
    fading_mgf,
    linear_to_db,
    path_gain,
    snr_pdf,
)
from .montecarlo import (
    BoundCheck,
    McEstimate,
    RngStream,
    bessel_i0,
    marcum_q1,
    mc_avg_ser,
    quad_avg_ser,
    sample_snr,
    verify_bounds,
)
from .scenario import Scenario, dump_scenario, load_scenario, parse_scenario
from .schemes import (
    AveragingMethod,
    CircuitPower,
    CircuitProfile,
    EnergyBreakdown,
    SchemeConfig,
    SchemeId,
    active_duration,
    amplifier_alpha,
    avg_ser_closed,
    avg_ser_general,
    bandwidth_efficiency,
    circuit_power,
    conditional_ser,
    max_constellation,
    ook_total_energy_sampled,
    required_symbol_energy,
    total_energy,
)
from .solver import (
    BeffRow,
    OptimumReport,
    RootSpec,
    SweepRow,
    SweepSpec,
    bisect,
    energy_vs_bandwidth_efficiency,
    optimal_m,
    sweep,
)

__version__ = "0.1.0"
