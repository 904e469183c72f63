"""Verification suites: oracle cross-checks behind `cavityqfi verify`.

Each suite pins one falsifiable claim about the library (closed-form
identities, quadrature-vs-closed-form agreement, master-equation consistency,
asymptotes) at a fixed tolerance and reports the worst observed deviation.
The acceptance tests run exactly these suites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mesolve
from .dynamics import SystemConfig, TimeGrid, amplitude, atom_state, \
    decoherence_rate, qubit_physicality
from .metrics import coherence_l1, metric_series, qfi_closed, qfi_general_2x2
from .presets import CONTOUR_PRESETS, CURVE_PRESETS, make_config
from .spectral import SpectralModel, beta_closed, beta_numeric, gamma_closed, \
    gamma_numeric


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f"  [{self.detail}]" if self.detail else ""
        return (f"{tag} {self.name}: worst {self.worst:.3e} "
                f"(tolerance {self.tolerance:.1e}){extra}")


class VerifyContext:
    """Shared lazy caches so suites reuse amplitude series and trajectories."""

    def __init__(self):
        self._amps = {}
        self._chain = {}

    def amps(self, cfg: SystemConfig, t_end: float, n: int):
        key = (cfg, t_end, n)
        if key not in self._amps:
            self._amps[key] = amplitude(cfg, TimeGrid(t_end, n))
        return self._amps[key]

    def chain(self, cfg: SystemConfig, t_end: float, n: int, halve: bool):
        """(max deviation of traced RK4 vs analytic state, trajectory)."""
        key = (cfg, t_end, n, halve)
        if key not in self._chain:
            grid = TimeGrid(t_end, n)
            dt = grid.dt
            k = max(1, math.ceil(dt / (0.01 / (cfg.omega0 + cfg.coupling)) - 1e-9))
            if halve:
                k *= 2
            icfg = mesolve.IntegratorConfig(step=dt / k)
            traj = mesolve.evolve(cfg, grid, icfg)
            ana = atom_state(cfg, self.amps(cfg, t_end, n).p)
            dev = float(np.max(np.abs(mesolve.partial_trace_cavity(traj) - ana)))
            self._chain[key] = (dev, traj)
        return self._chain[key]


def _curve_configs():
    """Distinct (preset, coupling, config) rows across the curve presets."""
    rows = []
    for preset in CURVE_PRESETS.values():
        for g in preset.couplings:
            rows.append((preset, g, make_config(preset.family, g, preset.reservoir)))
    return rows


def suite_relation_coherence_qfi(ctx: VerifyContext) -> SuiteResult:
    """C_l1^2 = F_phi at every point of every preset grid."""
    tol = 1e-12
    worst = 0.0
    for preset, _, cfg in _curve_configs():
        amps = ctx.amps(cfg, preset.t_end, preset.n_points)
        resid = max(s.relation_residual for s in metric_series(cfg, amps))
        worst = max(worst, resid)
    for preset in CONTOUR_PRESETS.values():
        for v in np.linspace(preset.lo, preset.hi, preset.n_param):
            if preset.sweep == "coupling":
                cfg = make_config(preset.family, float(v), preset.fixed)
            else:
                cfg = make_config(preset.family, preset.fixed, float(v))
            amps = ctx.amps(cfg, preset.t_end, preset.n_points)
            f_phi, _ = qfi_closed(amps.p, cfg.theta)
            c = coherence_l1(atom_state(cfg, amps.p))
            worst = max(worst, float(np.max(np.abs(c * c - f_phi))))
    return SuiteResult("relation-coherence-qfi", worst <= tol, worst, tol)


def suite_qfi_theta_identity(ctx: VerifyContext) -> SuiteResult:
    """F_phi = F_theta sin^2(theta) for theta in {pi/6, pi/3, pi/2}."""
    tol = 1e-12
    worst = 0.0
    for preset, g, _ in _curve_configs():
        for theta in (math.pi / 6, math.pi / 3, math.pi / 2):
            cfg = make_config(preset.family, g, preset.reservoir, theta=theta)
            amps = ctx.amps(cfg, preset.t_end, preset.n_points)
            f_phi, f_theta = qfi_closed(amps.p, cfg.theta)
            worst = max(worst, float(np.max(np.abs(
                f_phi - f_theta * math.sin(theta) ** 2))))
    return SuiteResult("closed-form-identity", worst <= tol, worst, tol)


GAMMA_ORACLE_SAMPLES = {
    "ohmic": {
        "params": (0.3, 0.5, 1.0, 3.0, 5.0),      # omega_c
        "omega_j": (0.0, 0.3, 1.0, 1.7, 2.5),
        "t": (0.3, 1.0, 2.0, 5.0, 10.0),
    },
    "lorentzian": {
        "params": (0.1, 0.3, 1.0, 3.0, 10.0),     # width lambda
        "omega_j": (0.1, 0.5, 1.0, 1.5, 3.0),     # peak sits at 0.5
        "t": (0.3, 1.0, 2.0, 5.0, 10.0),
    },
}


def _oracle_models(family: str, param: float) -> SpectralModel:
    if family == "ohmic":
        return SpectralModel.ohmic_lorentz_drude(param)
    return SpectralModel.lorentzian(1.0, param, detuning=0.5, omega0=1.0)


def suite_gamma_oracle(ctx: VerifyContext) -> SuiteResult:
    """Quadrature rate matches the closed form on a 5x5x5 sample per family.

    Mixed metric: relative error at 1e-6 where |gamma| >= 1e-3, absolute
    error at 1e-9 below that.
    """
    worst = 0.0
    detail = ""
    for family, axes in GAMMA_ORACLE_SAMPLES.items():
        for param in axes["params"]:
            model = _oracle_models(family, param)
            for wj in axes["omega_j"]:
                for t in axes["t"]:
                    gc = gamma_closed(model, wj, t)
                    gn = gamma_numeric(model, wj, t)
                    if abs(gc) < 1e-3:
                        score = abs(gn - gc) / 1e-9 * 1e-6
                    else:
                        score = abs(gn - gc) / abs(gc)
                    if score > worst:
                        worst = score
                        detail = f"{family} param={param} wj={wj} t={t}"
    return SuiteResult("gamma-oracle", worst <= 1e-6, worst, 1e-6, detail)


def suite_beta_consistency(ctx: VerifyContext) -> SuiteResult:
    """d beta/dt = gamma by central differences; Simpson beta matches closed."""
    h = 1e-5
    worst_fd = 0.0
    cases = [
        (_oracle_models("ohmic", 3.0), 1.0),
        (_oracle_models("ohmic", 0.3), 2.0),
        (_oracle_models("lorentzian", 1.0), 0.5),
        (_oracle_models("lorentzian", 0.5), 1.8),
    ]
    ts = np.linspace(0.01, 10.0, 80)
    for model, wj in cases:
        fd = (beta_closed(model, wj, ts + h) - beta_closed(model, wj, ts - h)) / (2 * h)
        worst_fd = max(worst_fd, float(np.max(np.abs(fd - gamma_closed(model, wj, ts)))))

    worst_num = 0.0
    grid = TimeGrid(10.0, 401)
    for model, wj in (( _oracle_models("ohmic", 3.0), 1.0),
                      (_oracle_models("lorentzian", 1.0), 0.5)):
        bn = beta_numeric(model, wj, grid)
        bc = beta_closed(model, wj, grid.times)
        worst_num = max(worst_num, float(np.max(np.abs(bn - bc))))

    worst = max(worst_fd / 1e-6, worst_num / 1e-5)
    detail = f"fd {worst_fd:.2e} (tol 1e-6), simpson {worst_num:.2e} (tol 1e-5)"
    return SuiteResult("beta-consistency", worst <= 1.0, worst, 1.0, detail)


MESOLVE_PRESETS = ("fig1a", "fig1b", "fig1c", "fig1d",
                   "fig4a", "fig4b", "fig4c", "fig4d")


def suite_mesolve_chain(ctx: VerifyContext) -> SuiteResult:
    """Traced RK4 trajectory matches the analytic state on the fig 1/4 presets.

    Base step (omega0 + coupling) * h = 0.01 must agree to 1e-6 elementwise;
    halving the step must improve the deviation at least 8x unless already at
    the 1e-10 accuracy floor.
    """
    tol = 1e-6
    worst = 0.0
    worst_ratio_score = 0.0
    detail = ""
    for name in MESOLVE_PRESETS:
        preset = CURVE_PRESETS[name]
        for g in preset.couplings:
            cfg = make_config(preset.family, g, preset.reservoir)
            dev, _ = ctx.chain(cfg, preset.t_end, preset.n_points, halve=False)
            if dev > worst:
                worst = dev
                detail = f"{name} coupling={g}"
            dev_half, _ = ctx.chain(cfg, preset.t_end, preset.n_points, halve=True)
            if dev_half > 1e-10:  # above the floor the 4th-order ratio must show
                ratio_score = 8.0 * dev_half / max(dev, 1e-300)
                worst_ratio_score = max(worst_ratio_score, ratio_score)
    passed = worst <= tol and worst_ratio_score <= 1.0
    detail += f"; halving score {worst_ratio_score:.2f} (<=1 means ratio >= 8 or floor)"
    return SuiteResult("mesolve-chain", passed, worst, tol, detail)


def _residual_grid(cfg: SystemConfig, t_end: float) -> TimeGrid:
    # central-difference error ~ h^2 M3 / 6 with M3 the fastest rate cubed;
    # the reservoir scale enters through the e^{-omega_c t} transients
    res = cfg.spectral.omega_c or cfg.spectral.width
    m3 = max(cfg.omega0 + cfg.coupling, 2.0 * cfg.coupling, res) ** 3
    h = min(math.sqrt(3e-5 / m3), 2e-3)
    return TimeGrid(t_end, int(round(t_end / h)) + 1)


def suite_timelocal_residual(ctx: VerifyContext) -> SuiteResult:
    """Analytic state satisfies its time-local equation to 1e-5 (Frobenius)."""
    tol = 1e-5
    worst = 0.0
    detail = ""
    cases = []
    for wc in (3.0, 0.3):
        cases += [("ohmic", g, wc, 20.0) for g in (0.01, 0.5, 1.0)]
    cases += [("lorentzian", g, 3.0, 10.0) for g in (0.01, 0.5, 1.0, 40.0)]
    cases += [("lorentzian", g, 0.1, 10.0) for g in (0.01, 0.5, 1.0)]
    for family, g, res, t_end in cases:
        cfg = make_config(family, g, res)
        resid = mesolve.timelocal_residual(cfg, _residual_grid(cfg, t_end))
        mx = float(np.nanmax(resid))
        if mx > worst:
            worst = mx
            detail = f"{family} coupling={g} reservoir={res}"
    return SuiteResult("timelocal-residual", worst <= tol, worst, tol, detail)


def suite_stable_asymptote(ctx: VerifyContext) -> SuiteResult:
    """Ohmic resonant coupling pins F_phi -> 1/4 and C_l1 -> 1/2 at late times."""
    tol = 1e-3
    cfg = make_config("ohmic", 1.0, 3.0)
    amps = ctx.amps(cfg, 200.0, 4001)
    f_phi, _ = qfi_closed(amps.p[-1], cfg.theta)
    c = coherence_l1(atom_state(cfg, amps.p[-1]))
    worst = max(abs(f_phi - 0.25), abs(c - 0.5))
    return SuiteResult("stable-asymptote", worst <= tol, worst, tol,
                       f"F_phi(200)={f_phi:.6f}, C(200)={c:.6f}")


def suite_weak_coupling_decay(ctx: VerifyContext) -> SuiteResult:
    """Weak-coupling F_phi decays monotonically and is < 1e-3 by t = 10."""
    cfg = make_config("ohmic", 0.01, 3.0)
    amps = ctx.amps(cfg, 10.0, 2001)
    f_phi, _ = qfi_closed(amps.p, cfg.theta)
    rise = float(np.max(np.diff(f_phi)))
    final = float(f_phi[-1])
    passed = rise <= 1e-12 and final < 1e-3
    return SuiteResult("weak-coupling-decay", passed, final, 1e-3,
                       f"max rise {rise:.2e}")


def suite_markovian_positivity(ctx: VerifyContext) -> SuiteResult:
    """Gamma(t) >= -1e-9 in the weak-coupling (Markovian) regimes."""
    floor = -1e-9
    worst = 0.0
    cases = [("ohmic", 0.01, 3.0, 20.0), ("ohmic", 0.5, 3.0, 20.0),
             ("lorentzian", 0.01, 3.0, 10.0)]
    for family, g, res, t_end in cases:
        cfg = make_config(family, g, res)
        amps = ctx.amps(cfg, t_end, 4001)
        gam = decoherence_rate(amps.p, amps.p_dot)
        if np.any(~np.isfinite(gam)):
            return SuiteResult("markovian-positivity", False, math.inf, -floor,
                               "unexpected singular samples")
        worst = max(worst, -float(np.min(gam)))
    return SuiteResult("markovian-positivity", worst <= -floor, worst, -floor)


def suite_lorentzian_plateau(ctx: VerifyContext) -> SuiteResult:
    """F_phi flattens to a quasi-stable plateau over Rt in [20, 50]."""
    tol = 0.05
    worst = 0.0
    detail = []
    for g, width, n in ((1.0, 0.1, 2000), (40.0, 3.0, 12800)):
        cfg = make_config("lorentzian", g, width)
        amps = ctx.amps(cfg, 50.0, n)
        f_phi, _ = qfi_closed(amps.p, cfg.theta)
        window = f_phi[(amps.times >= 20.0)]
        spread = float(window.max() - window.min())
        worst = max(worst, spread)
        detail.append(f"coupling={g}: spread {spread:.4f}")
    return SuiteResult("lorentzian-plateau", worst <= tol, worst, tol,
                       "; ".join(detail))


def suite_qfi_oracle(ctx: VerifyContext) -> SuiteResult:
    """Determinant-formula QFI with finite-difference derivatives matches
    the closed forms to 1e-5 relative wherever det(rho) > 1e-6."""
    tol = 1e-5
    h = 1e-6
    phi0 = 0.7
    worst = 0.0
    checked = 0
    for family, g, res, t_end in (("ohmic", 1.0, 3.0, 20.0),
                                  ("lorentzian", 1.0, 0.1, 50.0)):
        for theta in (math.pi / 6, math.pi / 3, math.pi / 2):
            cfg = make_config(family, g, res, theta=theta, phi=phi0)
            amps = ctx.amps(cfg, t_end, 201)
            f_phi, f_theta = qfi_closed(amps.p, theta)
            cfg_pp = make_config(family, g, res, theta=theta, phi=phi0 + h)
            cfg_pm = make_config(family, g, res, theta=theta, phi=phi0 - h)
            cfg_tp = make_config(family, g, res, theta=theta + h, phi=phi0)
            cfg_tm = make_config(family, g, res, theta=theta - h, phi=phi0)
            for i, p in enumerate(amps.p):
                rho = atom_state(cfg, p)
                if np.linalg.det(rho).real <= 1e-6:
                    continue
                dphi = (atom_state(cfg_pp, p) - atom_state(cfg_pm, p)) / (2 * h)
                dtheta = (atom_state(cfg_tp, p) - atom_state(cfg_tm, p)) / (2 * h)
                worst = max(worst,
                            abs(qfi_general_2x2(rho, dphi) - f_phi[i]) / f_phi[i],
                            abs(qfi_general_2x2(rho, dtheta) - f_theta[i]) / f_theta[i])
                checked += 1
    return SuiteResult("qfi-oracle", worst <= tol, worst, tol,
                       f"{checked} states checked")


def suite_physicality(ctx: VerifyContext) -> SuiteResult:
    """Every emitted qubit and dressed state meets its type tolerances."""
    worst = 0.0
    for preset, _, cfg in _curve_configs():
        amps = ctx.amps(cfg, preset.t_end, preset.n_points)
        d = qubit_physicality(atom_state(cfg, amps.p))
        worst = max(worst, d["hermiticity"] / 1e-12, d["trace"] / 1e-12,
                    max(0.0, -d["min_eigenvalue"]) / 1e-9)
    for preset in CONTOUR_PRESETS.values():
        for v in np.linspace(preset.lo, preset.hi, preset.n_param):
            if preset.sweep == "coupling":
                cfg = make_config(preset.family, float(v), preset.fixed)
            else:
                cfg = make_config(preset.family, preset.fixed, float(v))
            amps = ctx.amps(cfg, preset.t_end, preset.n_points)
            d = qubit_physicality(atom_state(cfg, amps.p))
            worst = max(worst, d["hermiticity"] / 1e-12, d["trace"] / 1e-12,
                        max(0.0, -d["min_eigenvalue"]) / 1e-9)
    for name in MESOLVE_PRESETS:
        preset = CURVE_PRESETS[name]
        for g in preset.couplings:
            cfg = make_config(preset.family, g, preset.reservoir)
            _, traj = ctx.chain(cfg, preset.t_end, preset.n_points, halve=False)
            d = mesolve.dressed_physicality(traj[::10])
            worst = max(worst, d["hermiticity"] / 1e-10, d["trace"] / 1e-10,
                        max(0.0, -d["min_eigenvalue"]) / 1e-6)
    return SuiteResult("physicality", worst <= 1.0, worst, 1.0,
                       "worst violation as fraction of its tolerance")


SUITES = {
    "relation-coherence-qfi": suite_relation_coherence_qfi,
    "closed-form-identity": suite_qfi_theta_identity,
    "gamma-oracle": suite_gamma_oracle,
    "beta-consistency": suite_beta_consistency,
    "mesolve-chain": suite_mesolve_chain,
    "timelocal-residual": suite_timelocal_residual,
    "stable-asymptote": suite_stable_asymptote,
    "weak-coupling-decay": suite_weak_coupling_decay,
    "markovian-positivity": suite_markovian_positivity,
    "lorentzian-plateau": suite_lorentzian_plateau,
    "qfi-oracle": suite_qfi_oracle,
    "physicality": suite_physicality,
}


def run_suites(names=None, ctx: VerifyContext | None = None) -> list[SuiteResult]:
    """Run the named suites (all by default) sharing one cache context."""
    if names is None:
        names = list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    ctx = ctx or VerifyContext()
    return [SUITES[n](ctx) for n in names]
