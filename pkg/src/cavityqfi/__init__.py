"""Open-system metrology of a two-level atom in a lossy cavity.

Amplitude damping through a structured reservoir (Ohmic Lorentz-Drude or
Lorentzian), the induced decoherence rate and frequency shift, and the
derived quantum Fisher information and l1 coherence, with independent
numerical oracles for every closed form.
"""

__version__ = "0.1.0"

from .dynamics import (
    AmplitudeRangeError,
    AmplitudeSeries,
    SystemConfig,
    TimeGrid,
    amplitude,
    atom_state,
    decoherence_rate,
    lamb_shift,
    qubit_physicality,
)
from .mesolve import (
    IntegratorConfig,
    dressed_physicality,
    evolve,
    generator_apply,
    initial_dressed,
    partial_trace_cavity,
    timelocal_residual,
)
from .metrics import (
    MetricSample,
    PureStateSingularityError,
    coherence_l1,
    metric_series,
    qfi_closed,
    qfi_general_2x2,
)
from .spectral import (
    ClosedFormUnavailableError,
    QuadratureConfig,
    QuadratureConvergenceError,
    SpectralKind,
    SpectralModel,
    beta_closed,
    beta_numeric,
    eval_density,
    gamma_closed,
    gamma_long_time,
    gamma_numeric,
)

__all__ = [
    "AmplitudeRangeError",
    "AmplitudeSeries",
    "ClosedFormUnavailableError",
    "IntegratorConfig",
    "MetricSample",
    "PureStateSingularityError",
    "QuadratureConfig",
    "QuadratureConvergenceError",
    "SpectralKind",
    "SpectralModel",
    "SystemConfig",
    "TimeGrid",
    "amplitude",
    "atom_state",
    "beta_closed",
    "beta_numeric",
    "coherence_l1",
    "decoherence_rate",
    "dressed_physicality",
    "eval_density",
    "evolve",
    "gamma_closed",
    "gamma_long_time",
    "gamma_numeric",
    "generator_apply",
    "initial_dressed",
    "lamb_shift",
    "metric_series",
    "partial_trace_cavity",
    "qfi_closed",
    "qfi_general_2x2",
    "qubit_physicality",
    "timelocal_residual",
    "amplitude",
    "__version__",
]
