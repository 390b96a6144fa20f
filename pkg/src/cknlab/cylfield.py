"""Discretized functions on the cylinder (0, inf) x S^(d-1).

After the change of variables r -> r^alpha the equation lives on a cylinder
carrying the measure dmu = r^(n-1) dr dtheta, the gradient
D = (alpha d/dr, grad_theta / r) and the operator
    L w = alpha^2 w'' + alpha^2 (n-1) w'/r + Lap_theta w / r^2.

Three angular representations are supported: Radial (no angular dependence,
any d), PeriodicGrid (full uniform grid on S^1, d = 2 only; angular calculus
is spectral) and SingleHarmonic (one sector, Lap_theta acts as -k(k+d-2)).
Nonlinear pointwise work is done on Radial and PeriodicGrid fields; full
angular grids for d >= 3 are out of scope.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDenominator,
    NonPositiveSample,
    RegionOutsideGrid,
    UnsupportedAngularRep,
)
from .grids import RadialGrid, d_ds, d2_ds2, default_grid, integrate_measure_radial, sphere_area
from .params import ParamSet


@dataclass(frozen=True)
class Radial:
    """No angular dependence; valid in any ambient dimension."""


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid of `size` angles on S^1 (d = 2 only)."""

    size: int = 256


@dataclass(frozen=True)
class SingleHarmonic:
    """One spherical-harmonic sector with eigenvalue k(k+d-2)."""

    k: int

    def eigenvalue(self, d: int) -> float:
        return float(self.k * (self.k + d - 2))


AngularRep = Radial | PeriodicGrid | SingleHarmonic


def theta_nodes(angular: PeriodicGrid) -> np.ndarray:
    return np.linspace(0.0, 2.0 * np.pi, angular.size, endpoint=False)


def theta_derivative(values: np.ndarray, order: int) -> np.ndarray:
    """Spectral angular derivative along axis 1 (periodic, d = 2)."""
    m = values.shape[1]
    spec = np.fft.rfft(values, axis=1)
    k = np.arange(spec.shape[1], dtype=float)
    mult = (1j * k) ** order
    if order % 2 == 1 and m % 2 == 0:
        mult[-1] = 0.0  # odd derivative of the unpaired Nyquist mode
    return np.fft.irfft(spec * mult[None, :], n=m, axis=1)


@dataclass(frozen=True)
class CylinderField:
    """Dense real samples of a function on the cylinder."""

    grid: RadialGrid
    angular: AngularRep
    values: np.ndarray
    params: ParamSet

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if isinstance(self.angular, PeriodicGrid):
            if self.params.d != 2:
                raise UnsupportedAngularRep("PeriodicGrid fields require d = 2")
            expected = (self.grid.count, self.angular.size)
        else:
            expected = (self.grid.count,)
        if v.shape != expected:
            raise ValueError(f"values shape {v.shape} != expected {expected}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field samples must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "CylinderField":
        return CylinderField(self.grid, self.angular, values, self.params)

    @property
    def min_value(self) -> float:
        return float(self.values.min())

    def require_positive(self, who: str) -> None:
        if self.min_value <= 0.0:
            raise NonPositiveSample(f"{who} requires a positive field "
                                    f"(min sample {self.min_value})")

    def to_csv(self, stream) -> None:
        """Snapshot as CSV, radial-major; theta column omitted for Radial."""
        fmt = "{:.17g}"
        if isinstance(self.angular, PeriodicGrid):
            stream.write("r,theta,value\n")
            th = theta_nodes(self.angular)
            for i, s in enumerate(self.grid.nodes):
                for j, t in enumerate(th):
                    stream.write(
                        f"{fmt.format(s)},{fmt.format(t)},{fmt.format(self.values[i, j])}\n"
                    )
        else:
            stream.write("r,value\n")
            for s, v in zip(self.grid.nodes, self.values):
                stream.write(f"{fmt.format(s)},{fmt.format(v)}\n")

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


@dataclass(frozen=True)
class MeasureRegion:
    """Radial interval (r_lo, r_hi) inside the grid support."""

    r_lo: float
    r_hi: float

    def __post_init__(self):
        if not (0.0 < self.r_lo < self.r_hi):
            raise ValueError("need 0 < r_lo < r_hi")


def full_region(grid: RadialGrid) -> MeasureRegion:
    return MeasureRegion(grid.r_min, grid.r_max)


def to_cylinder(
    u_sampler,
    ps: ParamSet,
    grid: RadialGrid | None = None,
    angular: AngularRep = Radial(),
    require_positive: bool = False,
) -> CylinderField:
    """Sample w(s, theta) = u(s^(1/alpha), theta) on the grid.

    ``u_sampler(radius, angle)`` must accept numpy arrays (broadcasting);
    radial samplers may ignore the angle argument.
    """
    grid = grid or default_grid()
    r_euclid = grid.nodes ** (1.0 / ps.alpha)
    if isinstance(angular, Radial):
        values = np.asarray(u_sampler(r_euclid, np.zeros_like(r_euclid)), dtype=float)
    elif isinstance(angular, PeriodicGrid):
        th = theta_nodes(angular)
        values = np.asarray(u_sampler(r_euclid[:, None], th[None, :]), dtype=float)
        values = np.broadcast_to(values, (grid.count, angular.size)).copy()
    else:
        raise UnsupportedAngularRep(
            "to_cylinder samples pointwise values; build SingleHarmonic fields directly"
        )
    field = CylinderField(grid, angular, values, ps)
    if require_positive:
        field.require_positive("to_cylinder")
    return field


@dataclass(frozen=True)
class CylGradient:
    radial_part: CylinderField      # alpha * w'
    angular_part: CylinderField     # grad_theta w / r (zero for Radial)
    square_norm: CylinderField      # alpha^2 w'^2 + |grad_theta w|^2 / r^2


def grad_cyl(w: CylinderField) -> CylGradient:
    """Cylinder gradient D w = (alpha w', grad_theta w / r)."""
    ps = w.params
    s = w.grid.column(w.values)
    wp = d_ds(w.values, w.grid)
    radial = ps.alpha * wp
    if isinstance(w.angular, Radial) or (
        isinstance(w.angular, SingleHarmonic) and w.angular.k == 0
    ):
        ang = np.zeros_like(w.values)
    elif isinstance(w.angular, PeriodicGrid):
        ang = theta_derivative(w.values, 1) / s
    else:
        raise UnsupportedAngularRep(
            "square-norm of a k >= 1 harmonic sector mixes sectors; "
            "use a PeriodicGrid field"
        )
    sq = radial**2 + ang**2
    return CylGradient(
        radial_part=w.with_values(radial),
        angular_part=w.with_values(ang),
        square_norm=w.with_values(sq),
    )


def apply_L(w: CylinderField) -> CylinderField:
    """L w = alpha^2 w'' + alpha^2 (n-1) w'/r + Lap_theta w / r^2."""
    ps = w.params
    s = w.grid.column(w.values)
    wp = d_ds(w.values, w.grid)
    wpp = d2_ds2(w.values, w.grid)
    out = ps.alpha**2 * (wpp + (ps.n - 1.0) * wp / s)
    if isinstance(w.angular, PeriodicGrid):
        out = out + theta_derivative(w.values, 2) / s**2
    elif isinstance(w.angular, SingleHarmonic) and w.angular.k > 0:
        lam = w.angular.eigenvalue(ps.d)
        out = out - lam * w.values / s**2
    return w.with_values(out)


def integrate_mu(f: CylinderField, region: MeasureRegion | None = None) -> float:
    """int f dmu over the region, dmu = r^(n-1) dr dtheta.

    Radial representation carries the full |S^(d-1)| factor; PeriodicGrid
    uses the spectrally-accurate periodic trapezoid in theta.
    """
    region = region or full_region(f.grid)
    eps = 1e-9 * f.grid.r_min
    if region.r_lo < f.grid.r_min - eps or region.r_hi > f.grid.r_max * (1 + 1e-12):
        raise RegionOutsideGrid(
            f"region ({region.r_lo}, {region.r_hi}) outside grid "
            f"({f.grid.r_min}, {f.grid.r_max})"
        )
    if isinstance(f.angular, Radial):
        profile = f.values
        factor = sphere_area(f.params.d)
    elif isinstance(f.angular, PeriodicGrid):
        profile = f.values.mean(axis=1)
        factor = 2.0 * np.pi
    else:
        raise UnsupportedAngularRep("integrate_mu supports Radial and PeriodicGrid")
    return factor * integrate_measure_radial(
        profile, f.grid, f.params.n, region.r_lo, region.r_hi
    )


def residual_eq_w(w: CylinderField) -> CylinderField:
    """L w + w^(p-1); vanishes at grid scale iff w solves the cylinder equation."""
    w.require_positive("residual_eq_w")
    lw = apply_L(w)
    return w.with_values(lw.values + w.values ** (w.params.p_exp - 1.0))


def ckn_rayleigh(w: CylinderField) -> float:
    """alpha^(1-2/p) (int |w|^p dmu)^(2/p) / int |Dw|^2 dmu.

    Quotient form of the weighted interpolation inequality on the cylinder;
    its value on a trial field is a certified lower witness for the sharp
    constant (no claim of sharpness is made here).
    """
    w.require_positive("ckn_rayleigh")
    ps = w.params
    p = ps.p_exp
    num = integrate_mu(w.with_values(np.abs(w.values) ** p))
    den = integrate_mu(grad_cyl(w).square_norm)
    if not (np.isfinite(den) and den > 1e-250):
        raise DegenerateDenominator(f"gradient energy {den} is degenerate")
    if not np.isfinite(num):
        raise DegenerateDenominator(f"p-norm integral {num} is not finite")
    return ps.alpha ** (1.0 - 2.0 / p) * num ** (2.0 / p) / den
