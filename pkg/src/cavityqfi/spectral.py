"""Reservoir spectral densities and the decay rates they induce.

A structured bosonic reservoir couples to the cavity mode and damps the two
dressed transitions of the resonant atom-cavity system.  Each transition at
frequency ``omega_j`` acquires a time-dependent rate

    gamma_j(t) = 2 Re int_0^t dtau int_-inf^+inf domega' e^{i(omega_j - omega')tau} J(omega')

and an accumulated exponent ``beta_j(t) = int_0^t gamma_j``.  Two families
have closed forms (Ohmic with a Lorentz-Drude cutoff, and a Lorentzian line);
both are also evaluated by an independent quadrature oracle so the closed
forms can be cross-checked.  Frequency integrals run over the full real line,
including negative frequencies.

Units: hbar = 1, all frequencies and rates share one scale (the atom
frequency for Ohmic scenarios, the dissipative rate for Lorentzian ones).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import cumulative_simpson, quad


class SpectralKind(enum.Enum):
    OHMIC_LORENTZ_DRUDE = "ohmic_lorentz_drude"
    LORENTZIAN = "lorentzian"
    TABULATED = "tabulated"


class ClosedFormUnavailableError(ValueError):
    """No closed-form rate exists for this model; use the numeric route."""


class QuadratureConvergenceError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance.

    Carries the achieved error estimate in ``estimate``.
    """

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class SpectralModel:
    """Tagged description of one reservoir spectral density family.

    Ohmic Lorentz-Drude:  J(w) = (2 w / pi) * omega_c^2 / (omega_c^2 + w^2)
    Lorentzian:           J(w) = (R lam^2 / 2 pi) / ((omega0 - w - detuning)^2 + lam^2)
    Tabulated:            linear interpolation of (frequency, density) samples,
                          zero outside the sampled range (out-of-range queries
                          are answered with 0, never an exception).

    The Lorentzian peak sits at ``omega0 - detuning``.  Both fields may be
    left ``None`` and are then resolved by the owning system configuration
    (detuning defaults to the atom-cavity coupling, the anchor to the atom
    frequency); standalone rate evaluation requires them to be set.
    """

    kind: SpectralKind
    omega_c: float | None = None
    rate: float | None = None
    width: float | None = None
    detuning: float | None = None
    omega0: float | None = None
    samples: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.kind is SpectralKind.OHMIC_LORENTZ_DRUDE:
            if self.omega_c is None or self.omega_c <= 0:
                raise ValueError(f"omega_c must be > 0, got {self.omega_c}")
        elif self.kind is SpectralKind.LORENTZIAN:
            if self.rate is None or self.rate <= 0:
                raise ValueError(f"rate must be > 0, got {self.rate}")
            if self.width is None or self.width <= 0:
                raise ValueError(f"width must be > 0, got {self.width}")
        elif self.kind is SpectralKind.TABULATED:
            if not self.samples or len(self.samples) < 2:
                raise ValueError("tabulated model needs at least two samples")
            freqs = [f for f, _ in self.samples]
            if any(b <= a for a, b in zip(freqs, freqs[1:])):
                raise ValueError("tabulated frequencies must be strictly increasing")
            if any(d < 0 for _, d in self.samples):
                raise ValueError("tabulated densities must be >= 0")

    @classmethod
    def ohmic_lorentz_drude(cls, omega_c: float) -> "SpectralModel":
        return cls(SpectralKind.OHMIC_LORENTZ_DRUDE, omega_c=float(omega_c))

    @classmethod
    def lorentzian(cls, rate: float, width: float,
                   detuning: float | None = None,
                   omega0: float | None = None) -> "SpectralModel":
        return cls(SpectralKind.LORENTZIAN, rate=float(rate), width=float(width),
                   detuning=None if detuning is None else float(detuning),
                   omega0=None if omega0 is None else float(omega0))

    @classmethod
    def tabulated(cls, freqs, densities) -> "SpectralModel":
        pairs = tuple((float(f), float(d)) for f, d in zip(freqs, densities))
        return cls(SpectralKind.TABULATED, samples=pairs)

    def resolved(self, coupling: float, omega0: float) -> "SpectralModel":
        """Fill unresolved Lorentzian defaults from a system configuration."""
        if self.kind is not SpectralKind.LORENTZIAN:
            return self
        det = self.detuning if self.detuning is not None else float(coupling)
        anchor = self.omega0 if self.omega0 is not None else float(omega0)
        if det == self.detuning and anchor == self.omega0:
            return self
        return replace(self, detuning=det, omega0=anchor)

    def lorentz_peak(self) -> float:
        """Center frequency of the Lorentzian line, ``omega0 - detuning``."""
        if self.kind is not SpectralKind.LORENTZIAN:
            raise ValueError("peak frequency defined only for Lorentzian models")
        if self.detuning is None or self.omega0 is None:
            raise ValueError(
                "Lorentzian detuning/omega0 unresolved; attach the model to a "
                "SystemConfig or pass them explicitly")
        return self.omega0 - self.detuning

    def support(self) -> tuple[float, float] | None:
        """Frequency interval outside which J vanishes (tabulated only)."""
        if self.kind is SpectralKind.TABULATED:
            return self.samples[0][0], self.samples[-1][0]
        return None


@dataclass(frozen=True)
class QuadratureConfig:
    """Controls for the numeric rate oracle.

    ``freq_window`` is the dimensionless half-width multiplier W: the core
    integration window extends W characteristic widths beyond the transition
    frequency and every spectral feature (oscillatory tails beyond it are
    integrated to infinity with sine-weighted quadrature).
    """

    freq_window: float = 50.0
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 10000

    def __post_init__(self):
        if self.freq_window < 10:
            raise ValueError(f"freq_window must be >= 10, got {self.freq_window}")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be > 0")
        if self.max_subdivisions < 100:
            raise ValueError("max_subdivisions must be >= 100")


DEFAULT_QUADRATURE = QuadratureConfig()


def eval_density(model: SpectralModel, omega_prime):
    """Spectral density J(omega') of the reservoir.  Accepts arrays."""
    w = np.asarray(omega_prime, dtype=float)
    if model.kind is SpectralKind.OHMIC_LORENTZ_DRUDE:
        wc2 = model.omega_c ** 2
        out = (2.0 * w / math.pi) * wc2 / (wc2 + w * w)
    elif model.kind is SpectralKind.LORENTZIAN:
        peak = model.lorentz_peak()
        lam2 = model.width ** 2
        out = (model.rate * lam2 / (2.0 * math.pi)) / ((peak - w) ** 2 + lam2)
    else:
        freqs = np.array([f for f, _ in model.samples])
        dens = np.array([d for _, d in model.samples])
        out = np.interp(w, freqs, dens, left=0.0, right=0.0)
    return out if out.ndim else float(out)


def _scalar_density(model: SpectralModel):
    """Plain-python density closure, cheap enough for quadrature callbacks."""
    if model.kind is SpectralKind.OHMIC_LORENTZ_DRUDE:
        wc2 = model.omega_c ** 2
        return lambda w: (2.0 * w / math.pi) * wc2 / (wc2 + w * w)
    if model.kind is SpectralKind.LORENTZIAN:
        peak = model.lorentz_peak()
        lam2 = model.width ** 2
        amp = model.rate * lam2 / (2.0 * math.pi)
        return lambda w: amp / ((peak - w) ** 2 + lam2)
    freqs = np.array([f for f, _ in model.samples])
    dens = np.array([d for _, d in model.samples])
    return lambda w: float(np.interp(w, freqs, dens, left=0.0, right=0.0))


def gamma_closed(model: SpectralModel, omega_j: float, t):
    """Closed-form decay rate gamma_j(t) of the dressed transition omega_j.

    Ohmic Lorentz-Drude:
        gamma = 4 wc^2/(wj^2+wc^2) [wj (1 - e^{-wc t} cos wj t) - wc e^{-wc t} sin wj t]
    Lorentzian (d = omega_j - peak):
        gamma = R lam^2/(d^2+lam^2) {1 + [(d/lam) sin d t - cos d t] e^{-lam t}}

    May be negative in the non-Markovian regime.  Vectorized over ``t``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    if model.kind is SpectralKind.OHMIC_LORENTZ_DRUDE:
        wc = model.omega_c
        wj = float(omega_j)
        e = np.exp(-wc * t)
        out = (4.0 * wc * wc / (wj * wj + wc * wc)) * (
            wj * (1.0 - e * np.cos(wj * t)) - wc * e * np.sin(wj * t))
    elif model.kind is SpectralKind.LORENTZIAN:
        lam = model.width
        d = float(omega_j) - model.lorentz_peak()
        e = np.exp(-lam * t)
        out = (model.rate * lam * lam / (d * d + lam * lam)) * (
            1.0 + ((d / lam) * np.sin(d * t) - np.cos(d * t)) * e)
    else:
        raise ClosedFormUnavailableError(
            "tabulated spectral densities have no closed-form rate; "
            "use gamma_numeric")
    return out if out.ndim else float(out)


def beta_closed(model: SpectralModel, omega_j: float, t):
    """Accumulated exponent beta_j(t) = int_0^t gamma_j, in closed form.

    For the Lorentzian family with d = omega_j - peak:
        beta = R lam^2/(d^2+lam^2) [t - 2 d e^{-lam t} sin(d t)/(d^2+lam^2)
               + (lam^2-d^2)(e^{-lam t} cos(d t) - 1)/(lam (d^2+lam^2))]
    which reduces on resonance (d = 0) to R (t + (e^{-lam t} - 1)/lam).
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    if model.kind is SpectralKind.OHMIC_LORENTZ_DRUDE:
        wc = model.omega_c
        wj = float(omega_j)
        den = wj * wj + wc * wc
        e = np.exp(-wc * t)
        out = (4.0 * wc * wc / den ** 2) * (
            den * wj * t
            + 2.0 * wc * wj * (e * np.cos(wj * t) - 1.0)
            - (wj * wj - wc * wc) * e * np.sin(wj * t))
    elif model.kind is SpectralKind.LORENTZIAN:
        lam = model.width
        d = float(omega_j) - model.lorentz_peak()
        den = d * d + lam * lam
        e = np.exp(-lam * t)
        out = (model.rate * lam * lam / den) * (
            t - 2.0 * d * e * np.sin(d * t) / den
            + (lam * lam - d * d) * (e * np.cos(d * t) - 1.0) / (lam * den))
    else:
        raise ClosedFormUnavailableError(
            "tabulated spectral densities have no closed-form exponent; "
            "use beta_numeric")
    return out if out.ndim else float(out)


def gamma_long_time(model: SpectralModel, omega_j: float) -> float:
    """Asymptotic (golden-rule) rate 2 pi J(omega_j), the t -> inf limit."""
    return 2.0 * math.pi * float(eval_density(model, omega_j))


def _core_window(model: SpectralModel, omega_j: float, W: float):
    """Finite integration window and feature list for the numeric rate.

    The window is the hull of the transition window ``omega_j +- W sigma``,
    its mirror image around zero (the Ohmic pole structure straddles the
    origin), and a window around each spectral feature.  Returns
    (lo, hi, features, bounded) with features as (center, width) pairs.
    """
    if model.kind is SpectralKind.TABULATED:
        lo, hi = model.support()
        return lo, hi, [], True
    if model.kind is SpectralKind.OHMIC_LORENTZ_DRUDE:
        sigma = model.omega_c
        feats = [(0.0, model.omega_c)]
    else:
        sigma = model.width
        feats = [(model.lorentz_peak(), model.width)]
    los = [omega_j - W * sigma, -(abs(omega_j) + W * sigma)]
    his = [omega_j + W * sigma, abs(omega_j) + W * sigma]
    for c, w in feats:
        los.append(c - W * max(w, sigma))
        his.append(c + W * max(w, sigma))
    return min(los), max(his), feats, False


def gamma_numeric(model: SpectralModel, omega_j: float, t: float,
                  cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Decay rate gamma_j(t) by adaptive quadrature, independent of the closed forms.

    The time integral of the double integral has the exact primitive
    2 Re int_0^t e^{i u tau} dtau = 2 sin(u t)/u, so

        gamma_j(t) = 2 int J(omega') sin((omega_j - omega') t)/(omega_j - omega') domega'.

    The frequency integral is split into a non-oscillatory core around the
    kernel peak (plain adaptive quadrature), oscillatory stretches inside the
    finite window (sine-weighted quadrature, split at spectral features), and
    sine-weighted tail integrals to +-infinity for unbounded families.

    Raises QuadratureConvergenceError when the combined error estimate
    exceeds the requested tolerances.
    """
    t = float(t)
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0.0:
        return 0.0

    J = _scalar_density(model)
    wj = float(omega_j)
    lo, hi, feats, bounded = _core_window(model, wj, cfg.freq_window)
    u_lo, u_hi = lo - wj, hi - wj
    if bounded and u_lo >= u_hi:
        return 0.0

    limit = cfg.max_subdivisions
    eps_a = cfg.abs_tol / 8.0
    eps_r = cfg.rel_tol
    total = 0.0
    est = 0.0
    failed = False

    def accumulate(res):
        nonlocal total, est, failed
        total += res[0]
        est += res[1]
        if len(res) > 3:  # quadpack appended a warning message
            failed = True

    # non-oscillatory core: a few kernel cycles around u = 0
    r0 = 6.0 * math.pi / t
    near_lo, near_hi = max(u_lo, -r0), min(u_hi, r0)
    if near_lo < near_hi:
        def f_near(u):
            k = t if u == 0.0 else math.sin(u * t) / u
            return J(wj + u) * k
        pts = sorted(c - wj for c, _ in feats if near_lo < c - wj < near_hi)
        accumulate(quad(f_near, near_lo, near_hi, points=pts or None,
                        limit=limit, epsabs=eps_a, epsrel=eps_r, full_output=1))

    def oscillatory(g, a, b, bks):
        edges = [a] + [x for x in sorted(bks) if a < x < b] + [b]
        for seg_lo, seg_hi in zip(edges[:-1], edges[1:]):
            accumulate(quad(g, seg_lo, seg_hi, weight="sin", wvar=t,
                            limit=limit, epsabs=eps_a, epsrel=eps_r,
                            full_output=1))

    g_plus = lambda u: J(wj + u) / u
    g_minus = lambda v: J(wj - v) / v
    if u_hi > r0:
        bks = [c - wj + s * 10.0 * w for c, w in feats for s in (-1, 1)]
        oscillatory(g_plus, max(r0, u_lo), u_hi, bks)
    if u_lo < -r0:
        bks = [wj - c + s * 10.0 * w for c, w in feats for s in (-1, 1)]
        oscillatory(g_minus, max(r0, -u_hi), -u_lo, bks)

    if not bounded:
        for g, a in ((g_plus, u_hi), (g_minus, -u_lo)):
            accumulate(quad(g, a, np.inf, weight="sin", wvar=t,
                            epsabs=max(eps_a, 1e-12), limlst=200,
                            limit=limit, full_output=1))

    total *= 2.0
    est *= 2.0
    if failed and est > max(cfg.abs_tol, cfg.rel_tol * abs(total)):
        raise QuadratureConvergenceError(
            f"rate quadrature did not converge: estimate {est:.3e} exceeds "
            f"tolerance (abs {cfg.abs_tol:.1e}, rel {cfg.rel_tol:.1e})", est)
    return total


def beta_numeric(model: SpectralModel, omega_j: float, grid,
                 cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> np.ndarray:
    """Cumulative exponent beta_j on a uniform grid from gamma_numeric samples.

    Composite Simpson rule over the sampled rates; beta(0) = 0 exactly.
    ``grid`` is a TimeGrid (uniform, starting at 0).
    """
    times = np.asarray(grid.times, dtype=float)
    if times[0] != 0.0:
        raise ValueError("grid must start at t = 0")
    if times.size == 1:
        return np.zeros(1)
    g = np.array([gamma_numeric(model, omega_j, t, cfg) for t in times])
    return cumulative_simpson(g, x=times, initial=0.0)
