"""Verification suites: identities, estimates, rigidity, spectrum.

Each suite runs a battery of numerical contracts (identity consistency at
4th order under refinement, sign and growth laws at their predicted rates,
radial rigidity sweeps, threshold location) and returns a JSON-ready report
with an overall pass flag and the first failing contract named.  Suites are
deterministic: a fixed seed fixes every random field, and pooled work items
are emitted in input order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bubble import bubble_cylinder, cylinder_amplitude
from .cylfield import CylinderField, PeriodicGrid
from .errors import NotFiniteEnergy
from .estimates import (
    finite_energy_chain,
    int_ineq_sides,
    low_dim_chain,
    make_cutoff,
    superharmonic_lower_bound,
    weak_energy,
)
from .fitting import fit_loglog, fitted_order
from .grids import RadialGrid
from .params import ParamSet, derive_params
from .pressure import (
    bochner_decomposition,
    bochner_k,
    divergence_form_residual,
    pressure_of,
    residual_eq_P,
    sphere_bochner,
)
from .radial_ode import radial_rigidity_sweep
from .reporting import ordered_map
from .spectral import fs_crossing, zero_mode_eigenvalue

DEFAULT_SEED = 20240601

# Admissible triples used across suites, chosen once so reports are stable.
D2_IDENTITY_PARAMS = (-0.3, 0.2, 2)            # n = 4, alpha = 0.3, symmetric
BUBBLE_PARAMS_5 = (
    (0.0, 0.0, 3),      # Sobolev, n = 3
    (-0.5, 0.0, 3),     # n = 6
    (0.0, 0.0, 4),      # Sobolev, n = 4
    (-0.3, 0.2, 2),     # d = 2, n = 4
    (0.1, 0.3, 5),      # n = 25/6
)
SWEEP_PARAMS_3 = ((0.0, 0.0, 3), (-0.5, 0.0, 3), (-0.3, 0.2, 2))
WEAK_ENERGY_PARAMS = {                          # intrinsic dimension -> triple
    5: (-0.25, 0.15, 3),
    6: (-0.5, 0.0, 3),
    8: (-0.7, -0.075, 3),
}
LOW_DIM_PARAMS = {                              # n in (2, 4) needs d = 2
    2.5: (-0.15, 0.05, 2),
    3.0: (-0.3, -0.3 + 1.0 / 3.0, 2),
    3.5: (-0.4, -0.4 + 3.0 / 7.0, 2),
}
SPECTRUM_ZERO_MODE_PARAMS = ((-0.5, 0.0, 3), (-0.4, 0.1, 2), (-0.25, 0.15, 3))
SPECTRUM_CROSSING_PAIRS = ((3, 6.0), (2, 4.0))


def interior_slice(count: int, margin: int = 4) -> slice:
    """Rows excluded from max-residual reports: `margin` nodes each end."""
    return slice(margin, count - margin)


def interior_max(values: np.ndarray, grid: RadialGrid, frac: float = 0.06,
                 margin: int = 4) -> float:
    """Max |values| over a fixed physical window (plus a node margin).

    Refinement studies compare this across grids, so the window is tied to
    the domain, not the node count.
    """
    x = grid.x_nodes
    span = x[-1] - x[0]
    lo, hi = x[0] + frac * span, x[-1] - frac * span
    mask = (x >= lo) & (x <= hi)
    mask[:margin] = False
    mask[len(x) - margin:] = False
    return float(np.max(np.abs(values[mask])))


# ---------------------------------------------------------------------------
# Random smooth positive fields (seeded; resampled exactly on any grid)
# ---------------------------------------------------------------------------

def random_log_field_coeffs(rng: np.random.Generator, radial_degree: int = 4,
                            max_harmonic: int = 3) -> dict:
    shape = (radial_degree + 1, max_harmonic + 1)
    return {
        "cos": rng.uniform(-0.25, 0.25, size=shape),
        "sin": rng.uniform(-0.25, 0.25, size=shape),
    }


def evaluate_log_field(coeffs: dict, grid: RadialGrid, angular: PeriodicGrid,
                       ps: ParamSet) -> CylinderField:
    """P(s, theta) = exp(sum_ik xi^i (c_ik cos k theta + s_ik sin k theta)).

    xi is the log-radius normalized to [-1, 1]; the same coefficients define
    the same analytic function on every grid, which is what refinement
    studies require.
    """
    x = grid.x_nodes
    xi = (2.0 * x - (x[0] + x[-1])) / (x[-1] - x[0])
    th = np.linspace(0.0, 2.0 * np.pi, angular.size, endpoint=False)
    ccos, csin = coeffs["cos"], coeffs["sin"]
    g = np.zeros((grid.count, angular.size))
    for i in range(ccos.shape[0]):
        radial = xi**i
        for k in range(ccos.shape[1]):
            ang = ccos[i, k] * np.cos(k * th) + csin[i, k] * np.sin(k * th)
            g += radial[:, None] * ang[None, :]
    return CylinderField(grid, angular, np.exp(g), ps)


def random_circle_profile(rng: np.random.Generator, size: int,
                          max_harmonic: int = 4) -> np.ndarray:
    """Positive trigonometric polynomial on S^1 (min value >= 0.15)."""
    th = np.linspace(0.0, 2.0 * np.pi, size, endpoint=False)
    a = rng.uniform(-1.0, 1.0, size=max_harmonic)
    b = rng.uniform(-1.0, 1.0, size=max_harmonic)
    total = np.sum(np.abs(a)) + np.sum(np.abs(b))
    target = rng.uniform(0.2, 0.85)
    a, b = a * target / total, b * target / total
    prof = np.ones_like(th)
    for k in range(1, max_harmonic + 1):
        prof += a[k - 1] * np.cos(k * th) + b[k - 1] * np.sin(k * th)
    return prof


def pressure_field_from_target(target: np.ndarray, grid: RadialGrid,
                               angular: PeriodicGrid, ps: ParamSet):
    """PressureField whose P equals `target` exactly (w inverted pointwise)."""
    w_vals = ((ps.n - 1.0) / target) ** ((ps.n - 2.0) / 2.0)
    return pressure_of(CylinderField(grid, angular, w_vals, ps))


# ---------------------------------------------------------------------------
# identities suite
# ---------------------------------------------------------------------------

@dataclass
class SuiteReport:
    suite: str
    seed: int
    checks: list = field(default_factory=list)

    def add(self, check: dict) -> None:
        self.checks.append(check)

    def to_dict(self) -> dict:
        ok = all(c.get("pass", False) for c in self.checks)
        first = next((c.get("name") or c.get("identity")
                      for c in self.checks if not c.get("pass", False)), None)
        return {
            "suite": self.suite,
            "seed": self.seed,
            "pass": ok,
            "first_failure": first,
            "checks": self.checks,
        }


def _refinement_sizes(levels: int = 3, base: int = 513) -> list[int]:
    return [(base - 1) * 2**i + 1 for i in range(levels)]


def run_identities_suite(
    seed: int = DEFAULT_SEED,
    n_fields: int = 8,
    n_sphere_fields: int = 100,
    levels: int = 3,
    base_count: int = 257,
    angular_size: int = 256,
    order_floor: float = 3.8,
    margin_tol: float = 1e-8,
    max_workers: int | None = None,
) -> dict:
    """Pointwise identity battery on seeded random fields and bubbles.

    * Bochner decomposition sum == definition of k[P] at 4th order (d = 2).
    * Divergence (Obata) identity residual -> 0 at 4th order on bubbles.
    * Pressure equation residual -> 0 at 4th order on bubbles.
    * Sphere inequality margin >= -tol on random positive circle profiles.
    """
    rng = np.random.default_rng(seed)
    report = SuiteReport(suite="identities", seed=seed)
    ps2 = derive_params(*D2_IDENTITY_PARAMS)
    sizes = _refinement_sizes(levels, base_count)
    grids = [RadialGrid(1e-3, 1e3, n) for n in sizes]
    h_values = [g.log_step for g in grids]
    angular = PeriodicGrid(angular_size)

    all_coeffs = [random_log_field_coeffs(rng) for _ in range(n_fields)]

    def decomposition_orders(coeffs):
        errs = []
        for g in grids:
            pf = pressure_field_from_target(
                evaluate_log_field(coeffs, g, angular, ps2).values, g, angular, ps2
            )
            diff = bochner_decomposition(pf).total().values - bochner_k(pf).values
            errs.append(interior_max(diff, g, frac=0.1))
        return errs, fitted_order(h_values, errs)

    field_results = ordered_map(decomposition_orders, all_coeffs, max_workers)
    orders = [o for _, o in field_results]
    report.add({
        "identity": "bochner_decomposition_vs_definition",
        "param_set": ps2.to_dict(),
        "grid_sizes": sizes,
        "fields": n_fields,
        "fitted_orders": orders,
        "min_fitted_order": min(orders),
        "max_residual_worst": max(max(errs) for errs, _ in field_results),
        "pass": min(orders) >= order_floor,
    })

    # Bubble pressure is exactly quadratic, so the h^4 truncation signal of
    # the solution identities has a small prefactor; the refinement triple
    # stays coarse enough to sit in the truncation-dominated regime (the
    # float64 sample-rounding floor grows like eps/h^2 under refinement).
    bubble_sizes = _refinement_sizes(levels, base=97)
    bubble_grids = [RadialGrid(1e-3, 1e3, nn) for nn in bubble_sizes]
    bubble_h = [g.log_step for g in bubble_grids]
    for triple in ((-0.5, 0.0, 3), D2_IDENTITY_PARAMS):
        ps = derive_params(*triple)
        div_errs, prs_errs = [], []
        for g in bubble_grids:
            pf = pressure_of(bubble_cylinder(ps, g))
            div_errs.append(interior_max(divergence_form_residual(pf).values, g, frac=0.1))
            prs_errs.append(interior_max(residual_eq_P(pf).values, g, frac=0.1))
        o_div = fitted_order(bubble_h, div_errs)
        o_prs = fitted_order(bubble_h, prs_errs)
        report.add({
            "identity": "divergence_identity_bubble",
            "param_set": ps.to_dict(),
            "grid_sizes": bubble_sizes,
            "max_residual": div_errs,
            "fitted_order": o_div,
            "pass": o_div >= order_floor,
        })
        report.add({
            "identity": "pressure_equation_bubble",
            "param_set": ps.to_dict(),
            "grid_sizes": bubble_sizes,
            "max_residual": prs_errs,
            "fitted_order": o_prs,
            "pass": o_prs >= order_floor,
        })

    sphere_grid = RadialGrid(1e-1, 1e1, 64)
    profiles = [random_circle_profile(rng, angular_size) for _ in range(n_sphere_fields)]

    def sphere_margin(profile):
        target = np.broadcast_to(profile[None, :], (sphere_grid.count, angular_size)).copy()
        pf = pressure_field_from_target(target, sphere_grid, angular, ps2)
        return sphere_bochner(pf, sphere_grid.count // 2).margin

    margins = ordered_map(sphere_margin, profiles, max_workers)
    report.add({
        "identity": "sphere_inequality_margin",
        "param_set": ps2.to_dict(),
        "fields": n_sphere_fields,
        "min_margin": min(margins),
        "pass": min(margins) >= -margin_tol,
    })
    return report.to_dict()


# ---------------------------------------------------------------------------
# estimates suite
# ---------------------------------------------------------------------------

def _param_label(ps: ParamSet) -> str:
    return f"a={ps.a};b={ps.b};d={ps.d}"


def run_estimates_suite(seed: int = DEFAULT_SEED, grid_count: int = 2048) -> tuple[dict, list]:
    """Growth-law battery on bubble inputs; returns (report, CSV rows).

    CSV columns: lemma, params, R, lhs, rhs, fitted_exponent, bound, pass.
    """
    report = SuiteReport(suite="estimates", seed=seed)
    rows = []
    grid = RadialGrid(1e-3, 1e3, grid_count)

    # comparison lower bound + extremal tail rate
    for triple in SWEEP_PARAMS_3:
        ps = derive_params(*triple)
        w = bubble_cylinder(ps, grid)
        bound = superharmonic_lower_bound(w, rho=1.0)
        tail = (grid.nodes >= 1e2)
        slope = fit_loglog(grid.nodes[tail], w.values[tail]).slope
        ok = bound.min_margin >= -1e-10 and abs(slope - (2.0 - ps.n)) <= 1e-3
        report.add({
            "name": "superharmonic_lower_bound",
            "param_set": ps.to_dict(),
            "A": bound.A,
            "min_margin": bound.min_margin,
            "tail_slope": slope,
            "expected_tail_slope": 2.0 - ps.n,
            "pass": ok,
        })
        rows.append(("superharmonic_bound", _param_label(ps), bound.rho,
                     bound.min_margin, bound.A, slope, 2.0 - ps.n, ok))

    # weak energy growth law
    for n_target, triple in WEAK_ENERGY_PARAMS.items():
        ps = derive_params(*triple)
        w = bubble_cylinder(ps, grid)
        for t in (-1.5, -2.5):
            res = weak_energy(w, t)
            ea, eb = res.fitted_exponents
            ok = ea <= res.beta + 0.1 and eb <= res.beta + 0.1
            report.add({
                "name": "weak_energy",
                "param_set": ps.to_dict(),
                "t": t,
                "beta": res.beta,
                "fitted_exponents": [ea, eb],
                "pass": ok,
            })
            for R, va, vb in zip(res.R_list, res.values_A, res.values_B):
                rows.append(("weak_energy", _param_label(ps) + f";t={t}",
                             float(R), float(va), float(vb), max(ea, eb),
                             res.beta + 0.1, ok))

    # low intrinsic dimension chain (wide grid so the fit window is asymptotic)
    wide = RadialGrid(1e-3, 1e4, 2561)
    R_list = 128.0 * 2.0 ** np.arange(6)
    for n_target, triple in LOW_DIM_PARAMS.items():
        ps = derive_params(*triple)
        pf = pressure_of(bubble_cylinder(ps, wide))
        chain = low_dim_chain(pf, R_list=R_list)
        expected = 4.0 - ps.n
        ok = abs(chain.grad_integral_growth - expected) <= 0.05 and chain.closes
        report.add({
            "name": "low_dim_chain",
            "param_set": ps.to_dict(),
            "grad_integral_growth": chain.grad_integral_growth,
            "expected_growth": expected,
            "defect_decay": chain.defect_decay,
            "closes": chain.closes,
            "pass": ok,
        })
        for R, gv, bv in zip(chain.R_list, chain.grad_values, chain.bound_values):
            rows.append(("defect_vs_gradient", _param_label(ps), float(R),
                         float(gv), float(bv), chain.grad_integral_growth,
                         expected, ok))

    # finite energy chain at n = 6 plus the not-finite-energy pathway at n = 3
    ps6 = derive_params(-0.5, 0.0, 3)
    chain6 = finite_energy_chain(bubble_cylinder(ps6, grid))
    ok6 = (abs(chain6.pressure_tail_exponent - (4.0 - ps6.n)) <= 0.05
           and abs(chain6.defect) < 1e-6)
    report.add({
        "name": "finite_energy_chain",
        "param_set": ps6.to_dict(),
        "pressure_tail_exponent": chain6.pressure_tail_exponent,
        "expected_exponent": 4.0 - ps6.n,
        "plain_tail_exponent": chain6.plain_tail_exponent,
        "total_energy": chain6.total_energy,
        "defect": chain6.defect,
        "pass": ok6,
    })
    for R, pv, ev in zip(chain6.R_list, chain6.pressure_tail_values,
                         chain6.plain_tail_values):
        rows.append(("finite_energy_tail", _param_label(ps6), float(R),
                     float(pv), float(ev), chain6.pressure_tail_exponent,
                     4.0 - ps6.n, ok6))

    ps3 = derive_params(0.0, 0.0, 3)
    try:
        finite_energy_chain(bubble_cylinder(ps3, grid))
        uncertified = False
    except NotFiniteEnergy:
        uncertified = True
    report.add({
        "name": "finite_energy_gate_n3",
        "param_set": ps3.to_dict(),
        "uncertified_as_expected": uncertified,
        "pass": uncertified,
    })

    # localized defect inequality on the bubble
    psh = derive_params(-0.5, 0.0, 3)
    pfh = pressure_of(bubble_cylinder(psh, grid))
    R_cut = np.array([8.0, 16.0, 32.0, 64.0, 128.0, 256.0])
    lhs_vals, rhs_vals = [], []
    for R in R_cut:
        sides = int_ineq_sides(pfh, make_cutoff(R, s_power=2.0))
        lhs_vals.append(sides.lhs)
        rhs_vals.append(sides.rhs_weighted)
    rhs_slope = fit_loglog(R_cut, rhs_vals).slope
    lhs_ok = min(lhs_vals) >= -1e-8 and max(abs(v) for v in lhs_vals) < 1e-6
    rhs_ok = abs(rhs_slope - (2.0 - psh.n)) <= 0.1 and min(rhs_vals) > 0
    report.add({
        "name": "localized_defect_inequality",
        "param_set": psh.to_dict(),
        "lhs_values": lhs_vals,
        "rhs_values": rhs_vals,
        "rhs_fitted_exponent": rhs_slope,
        "expected_rhs_exponent": 2.0 - psh.n,
        "empirical_C": max(l / r for l, r in zip(lhs_vals, rhs_vals)),
        "pass": lhs_ok and rhs_ok,
    })
    for R, l, r in zip(R_cut, lhs_vals, rhs_vals):
        rows.append(("localized_defect", _param_label(psh), float(R), float(l),
                     float(r), rhs_slope, 2.0 - psh.n, lhs_ok and rhs_ok))

    return report.to_dict(), rows


# ---------------------------------------------------------------------------
# rigidity suite
# ---------------------------------------------------------------------------

def run_rigidity_suite(
    seed: int = DEFAULT_SEED,
    param_triples=SWEEP_PARAMS_3,
    amplitudes: int = 10,
    tol: float = 1e-6,
    max_workers: int | None = None,
) -> dict:
    """Radial rigidity sweeps: every decaying shot matches a scaled extremal."""
    report = SuiteReport(suite="rigidity", seed=seed)

    def one(triple):
        ps = derive_params(*triple)
        c0 = cylinder_amplitude(ps)
        w0_grid = c0 * np.logspace(-0.5, 0.5, amplitudes)
        return radial_rigidity_sweep(ps, w0_grid, tol=tol)

    for sweep in ordered_map(one, list(param_triples), max_workers):
        d = sweep.to_dict()
        d["name"] = "radial_rigidity_sweep"
        d["pass"] = sweep.all_matched
        report.add(d)
    return report.to_dict()


# ---------------------------------------------------------------------------
# spectrum suite
# ---------------------------------------------------------------------------

def run_spectrum_suite(
    seed: int = DEFAULT_SEED,
    zero_mode_triples=SPECTRUM_ZERO_MODE_PARAMS,
    crossing_pairs=SPECTRUM_CROSSING_PAIRS,
    N: int = 2000,
    zero_tol: float = 1e-6,
    gap_tol: float = 0.01,
) -> dict:
    """Zero-mode oracle plus threshold crossings against the closed form."""
    report = SuiteReport(suite="spectrum", seed=seed)
    for triple in zero_mode_triples:
        ps = derive_params(*triple)
        est = zero_mode_eigenvalue(ps, N=N)
        report.add({
            "name": "zero_mode",
            "param_set": ps.to_dict(),
            "eigenvalue": est.value,
            "uncertainty": est.uncertainty,
            "pass": abs(est.value) < zero_tol,
        })
    for d, n in crossing_pairs:
        crossing = fs_crossing(d, n, N=N)
        report.add({
            "name": "threshold_crossing",
            "d": d,
            "n": n,
            "alpha_star_numeric": crossing.alpha_star_numeric,
            "alpha_star_formula": crossing.alpha_star_formula,
            "relative_gap": crossing.relative_gap,
            "a_at_crossing": crossing.a_at_crossing,
            "pass": crossing.relative_gap < gap_tol,
        })
    return report.to_dict()


SUITES = {
    "identities": lambda **kw: run_identities_suite(**kw),
    "estimates": lambda **kw: run_estimates_suite(**kw)[0],
    "rigidity": lambda **kw: run_rigidity_suite(**kw),
    "spectrum": lambda **kw: run_spectrum_suite(**kw),
}
