"""Reduced atom state and time-local generator ingredients.

A resonant atom-cavity pair starts with one excitation at most and a cavity
vacuum; the cavity leaks into a structured reservoir.  The excited-state
probability amplitude is

    p(t) = 1/2 sum_{j=1,2} e^{-i omega_j t} e^{-beta_j(t)/4}

with dressed transition frequencies omega_1 = omega0 - coupling and
omega_2 = omega0 + coupling.  The atom's 2x2 density matrix, the decoherence
rate Gamma(t) = -2 Re(pdot/p) and the frequency shift S(t) = -2 Im(pdot/p)
all follow from p(t).  pdot is always evaluated analytically through the
closed (or numerically integrated) beta_j and gamma_j, never by numerical
differentiation; finite differences appear only in tests as oracles.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .spectral import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    SpectralModel,
    beta_closed,
    beta_numeric,
    gamma_closed,
    gamma_numeric,
)

logger = logging.getLogger(__name__)

EPS_AMPLITUDE = 1e-9    # slack on |p| <= 1
EPS_P_SINGULAR = 1e-10  # |p| at or below this flags Gamma/S as singular


class AmplitudeRangeError(ValueError):
    """Probability amplitude left the physical range |p| <= 1 + 1e-9."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time samples starting exactly at 0.

    ``n_points`` counts samples (a grid of one point is just [0]); spacing is
    ``t_end / (n_points - 1)``.  Times are in scaled units (omega0*t or R*t).
    """

    t_end: float
    n_points: int

    def __post_init__(self):
        if self.t_end <= 0:
            raise ValueError(f"t_end must be > 0, got {self.t_end}")
        if self.n_points < 1:
            raise ValueError(f"n_points must be >= 1, got {self.n_points}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.n_points)

    @property
    def dt(self) -> float:
        if self.n_points < 2:
            raise ValueError("single-point grid has no spacing")
        return self.t_end / (self.n_points - 1)


@dataclass(frozen=True)
class SystemConfig:
    """Atom-cavity parameters, initial Bloch angles, and the reservoir model.

    theta is the polar angle of the initial pure atom state
    cos(theta/2)|e> + e^{i phi} sin(theta/2)|g>; phi is the estimated phase.
    An attached Lorentzian model with unresolved detuning/anchor is completed
    here: detuning defaults to the coupling, the anchor to omega0.
    """

    omega0: float
    coupling: float
    theta: float
    phi: float
    spectral: SpectralModel

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")
        if self.coupling < 0:
            raise ValueError(f"coupling must be >= 0, got {self.coupling}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")
        object.__setattr__(
            self, "spectral", self.spectral.resolved(self.coupling, self.omega0))

    @property
    def omega_1(self) -> float:
        return self.omega0 - self.coupling

    @property
    def omega_2(self) -> float:
        return self.omega0 + self.coupling


@dataclass(frozen=True)
class AmplitudeSeries:
    """p(t), its analytic derivative, and the per-transition rate data."""

    times: np.ndarray
    p: np.ndarray
    p_dot: np.ndarray
    beta1: np.ndarray
    beta2: np.ndarray
    gamma1: np.ndarray
    gamma2: np.ndarray

    def validate(self) -> None:
        if self.p[0] != 1.0 + 0.0j:
            raise AmplitudeRangeError(f"p(0) must be exactly 1, got {self.p[0]}")
        worst = float(np.max(np.abs(self.p)))
        if worst > 1.0 + EPS_AMPLITUDE:
            raise AmplitudeRangeError(
                f"|p| exceeded the physical range: max |p| = {worst}")


def amplitude(cfg: SystemConfig, grid: TimeGrid, mode: str = "closed",
              quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
              dissipation: bool = True) -> AmplitudeSeries:
    """Amplitude series on the grid, from closed-form or quadrature rates.

    mode="closed" uses the analytic beta_j/gamma_j (raises
    ClosedFormUnavailableError for tabulated reservoirs); mode="numeric" uses
    the quadrature oracle plus composite Simpson for the exponents.  With
    ``dissipation=False`` the rates are forced to zero (test hook exposing
    the bare vacuum-Rabi dynamics p = e^{-i omega0 t} cos(coupling t)).
    """
    times = grid.times
    w1, w2 = cfg.omega_1, cfg.omega_2
    if not dissipation:
        zeros = np.zeros_like(times)
        b1 = b2 = g1 = g2 = zeros
    elif mode == "closed":
        b1 = np.atleast_1d(beta_closed(cfg.spectral, w1, times))
        b2 = np.atleast_1d(beta_closed(cfg.spectral, w2, times))
        g1 = np.atleast_1d(gamma_closed(cfg.spectral, w1, times))
        g2 = np.atleast_1d(gamma_closed(cfg.spectral, w2, times))
    elif mode == "numeric":
        b1 = beta_numeric(cfg.spectral, w1, grid, quadrature)
        b2 = beta_numeric(cfg.spectral, w2, grid, quadrature)
        g1 = np.array([gamma_numeric(cfg.spectral, w1, t, quadrature) for t in times])
        g2 = np.array([gamma_numeric(cfg.spectral, w2, t, quadrature) for t in times])
    else:
        raise ValueError(f"mode must be 'closed' or 'numeric', got {mode!r}")

    e1 = np.exp(-1j * w1 * times - b1 / 4.0)
    e2 = np.exp(-1j * w2 * times - b2 / 4.0)
    p = 0.5 * (e1 + e2)
    p_dot = 0.5 * ((-1j * w1 - g1 / 4.0) * e1 + (-1j * w2 - g2 / 4.0) * e2)
    series = AmplitudeSeries(times=times, p=p, p_dot=p_dot,
                             beta1=b1, beta2=b2, gamma1=g1, gamma2=g2)
    series.validate()
    return series


def atom_state(cfg: SystemConfig, p):
    """Atom density matrix in the {|e>, |g>} basis for amplitude value(s) p.

        rho_ee = |p|^2 cos^2(theta/2)
        rho_eg = p e^{-i phi} sin(theta/2) cos(theta/2)

    Accepts a scalar or an array of amplitudes; returns shape (..., 2, 2).
    """
    p = np.asarray(p, dtype=complex)
    mag = np.abs(p)
    if np.any(mag > 1.0 + EPS_AMPLITUDE):
        raise AmplitudeRangeError(
            f"|p| = {float(np.max(mag))} exceeds 1 + {EPS_AMPLITUDE}")
    c = math.cos(cfg.theta / 2.0)
    s = math.sin(cfg.theta / 2.0)
    rho = np.empty(p.shape + (2, 2), dtype=complex)
    rho[..., 0, 0] = mag ** 2 * c * c
    rho[..., 0, 1] = p * np.exp(-1j * cfg.phi) * s * c
    rho[..., 1, 0] = np.conj(rho[..., 0, 1])
    rho[..., 1, 1] = 1.0 - rho[..., 0, 0]
    return rho


def _log_ratio(p, p_dot, eps_p):
    p = np.asarray(p, dtype=complex)
    p_dot = np.asarray(p_dot, dtype=complex)
    ok = np.abs(p) > eps_p
    flagged = int(np.size(ok) - np.count_nonzero(ok))
    if flagged:
        logger.debug("flagged %d singular amplitude samples (|p| <= %g)",
                     flagged, eps_p)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(ok, p_dot / np.where(ok, p, 1.0),
                         complex(np.nan, np.nan))
    return ratio


def decoherence_rate(p, p_dot, eps_p: float = EPS_P_SINGULAR):
    """Gamma(t) = -2 Re(pdot/p); positive while the atom loses information.

    Samples with |p| <= eps_p are flagged as NaN rather than raising, so
    sweep outputs stay rectangular.
    """
    out = -2.0 * np.real(_log_ratio(p, p_dot, eps_p))
    return out if out.ndim else float(out)


def lamb_shift(p, p_dot, eps_p: float = EPS_P_SINGULAR):
    """Time-dependent frequency shift S(t) = -2 Im(pdot/p); NaN where singular."""
    out = -2.0 * np.imag(_log_ratio(p, p_dot, eps_p))
    return out if out.ndim else float(out)


def qubit_physicality(rho) -> dict:
    """Worst-case physicality diagnostics over a stack of 2x2 states.

    Returns {'hermiticity', 'trace', 'min_eigenvalue'} where the first two
    are max absolute deviations.  Type tolerances: hermitian and unit trace
    to 1e-12, eigenvalues >= -1e-9.
    """
    rho = np.asarray(rho)
    herm = float(np.max(np.abs(rho - np.conj(np.swapaxes(rho, -1, -2)))))
    tr = float(np.max(np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1.0)))
    eigs = np.linalg.eigvalsh(rho)
    return {"hermiticity": herm, "trace": tr, "min_eigenvalue": float(eigs.min())}


def check_qubit_state(rho, herm_tol: float = 1e-12, trace_tol: float = 1e-12,
                      eig_floor: float = -1e-9) -> None:
    d = qubit_physicality(rho)
    if d["hermiticity"] > herm_tol:
        raise ValueError(f"state not Hermitian to {herm_tol}: {d['hermiticity']}")
    if d["trace"] > trace_tol:
        raise ValueError(f"trace deviates from 1 by {d['trace']}")
    if d["min_eigenvalue"] < eig_floor:
        raise ValueError(f"negative eigenvalue {d['min_eigenvalue']}")
