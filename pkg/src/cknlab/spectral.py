"""Sector linearization on the log-cylinder and the symmetry-breaking threshold.

Writing w = s^(-Lambda) v(ln s, theta) with Lambda = (n-2)/2 turns the
linearization of the cylinder equation around the radial extremal into a
one-dimensional Schroedinger problem per spherical-harmonic sector:

    H_k psi = [-alpha^2 d^2/dt^2 + alpha^2 Lambda^2 + lambda_k
               - (p-1) v*(t)^(p-2)] psi,      lambda_k = k (k + d - 2),

where v*(t) = c0 (2 cosh t)^(-(n-2)/2) is the extremal in log-cylinder
variables.  Differentiating the profile equation in t shows H_0 vdot* = 0:
the translation mode (Euclidean scaling) is an exact zero mode, and since
vdot* is odd it is the ground state of the odd-parity k = 0 problem.  That
zero is the module's built-in correctness oracle.  The full k = 0 ground
state sits at -alpha^2 (n-1) (the potential is an exactly solvable sech^2
well), so the k = 1 bottom eigenvalue -alpha^2 (n-1) + (d-1) changes sign
precisely at alpha = sqrt((d-1)/(n-1)); locating that crossing numerically
against the closed form is the headline check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .bubble import cylinder_amplitude
from .errors import AdmissibilityError, ConvergenceFailure, NoSignChange, SubcriticalRange
from .params import ParamSet, derive_params


def soliton_profile(ps: ParamSet, t):
    """v*(t) = c0 (2 cosh t)^(-(n-2)/2), the extremal in log-cylinder variables."""
    if not ps.p_exp > 2.0:
        raise SubcriticalRange("soliton profile needs p > 2")
    t = np.asarray(t, dtype=float)
    c0 = cylinder_amplitude(ps)
    out = c0 * (2.0 * np.cosh(t)) ** (-(ps.n - 2.0) / 2.0)
    return out if out.shape else float(out)


def sector_potential(ps: ParamSet, k: int, t):
    """V_k(t) = alpha^2 Lambda^2 + lambda_k - (p-1) v*(t)^(p-2)."""
    lam_k = float(k * (k + ps.d - 2))
    Lambda = (ps.n - 2.0) / 2.0
    v = np.asarray(soliton_profile(ps, t))
    return ps.alpha**2 * Lambda**2 + lam_k - (ps.p_exp - 1.0) * v ** (ps.p_exp - 2.0)


@dataclass(frozen=True)
class SectorOperator:
    """Symmetric tridiagonal discretization of H_k on a truncated line.

    parity "full": Dirichlet problem on (-T, T).
    parity "odd":  Dirichlet at 0 and T, i.e. H_k restricted to odd modes;
                   this is where the translation zero mode lives for k = 0.
    """

    ps: ParamSet
    k: int
    T: float
    N: int
    parity: str = "full"

    def __post_init__(self):
        if self.parity not in ("full", "odd"):
            raise ValueError("parity must be 'full' or 'odd'")
        if self.N < 64:
            raise ValueError("need N >= 64 grid intervals")

    @property
    def lambda_k(self) -> float:
        return float(self.k * (self.k + self.ps.d - 2))

    def interior_nodes(self) -> tuple[np.ndarray, float]:
        if self.parity == "odd":
            h = self.T / self.N
            t = h * np.arange(1, self.N)
        else:
            h = 2.0 * self.T / self.N
            t = -self.T + h * np.arange(1, self.N)
        return t, h


def default_domain(ps: ParamSet) -> float:
    """Truncation half-width: the well is exponentially localized at rate n-2."""
    Lambda = (ps.n - 2.0) / 2.0
    return max(20.0 / Lambda, 10.0)


def build_sector_operator(ps: ParamSet, k: int, T: float | None = None,
                          N: int = 2000, parity: str = "full") -> SectorOperator:
    return SectorOperator(ps=ps, k=int(k), T=float(T if T is not None else default_domain(ps)),
                          N=int(N), parity=parity)


def lowest_eigenvalue(op: SectorOperator) -> float:
    """Smallest eigenvalue of the discretized operator (single resolution)."""
    t, h = op.interior_nodes()
    diag = 2.0 * op.ps.alpha**2 / h**2 + sector_potential(op.ps, op.k, t)
    off = np.full(len(t) - 1, -op.ps.alpha**2 / h**2)
    vals = eigvalsh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    out = float(vals[0])
    if not math.isfinite(out):
        raise ConvergenceFailure("eigensolver returned a non-finite value")
    return out


@dataclass(frozen=True)
class EigenvalueEstimate:
    value: float        # Richardson-extrapolated over the grid step
    uncertainty: float  # |step refinement| / 3 + |domain extension| shifts
    raw: dict


def converged_lowest_eigenvalue(ps: ParamSet, k: int, N: int = 2000,
                                T: float | None = None,
                                parity: str = "full") -> EigenvalueEstimate:
    """Lowest eigenvalue extrapolated over N (h^2 Richardson) and probed in T."""
    T = float(T if T is not None else default_domain(ps))
    e1 = lowest_eigenvalue(build_sector_operator(ps, k, T, N, parity))
    e2 = lowest_eigenvalue(build_sector_operator(ps, k, T, 2 * N, parity))
    # same grid step as e2 on the wider domain, isolating the truncation error
    e3 = lowest_eigenvalue(build_sector_operator(ps, k, 1.5 * T, 3 * N, parity))
    value = (4.0 * e2 - e1) / 3.0
    unc = abs(e2 - e1) / 3.0 + abs(e3 - e2)
    return EigenvalueEstimate(value=value, uncertainty=unc,
                              raw={"e_N": e1, "e_2N": e2, "e_2N_1.5T": e3,
                                   "N": N, "T": T, "parity": parity, "k": k})


def zero_mode_eigenvalue(ps: ParamSet, N: int = 2000,
                         T: float | None = None) -> EigenvalueEstimate:
    """The translation zero mode: lowest odd-parity k = 0 eigenvalue (= 0 exactly)."""
    return converged_lowest_eigenvalue(ps, k=0, N=N, T=T, parity="odd")


def path_params(d: int, n: float, alpha: float) -> ParamSet:
    """The (a, b) pair realizing given (d, n, alpha): b = a + 1 - d/n, a from alpha.

    On this path n is constant and alpha is affine in a, so a single weight
    sweep realizes any alpha below the admissibility ceiling.
    """
    a_c = (d - 2) / 2.0
    c1 = d / n
    c2 = a_c + 1.0 - d / n
    a = a_c - alpha * c2 / c1
    b = a + 1.0 - d / n
    return derive_params(a, b, d, strict_subcritical=True)


@dataclass(frozen=True)
class FsCrossing:
    alpha_star_numeric: float
    alpha_star_formula: float
    d: int
    n: float
    a_at_crossing: float

    @property
    def relative_gap(self) -> float:
        return abs(self.alpha_star_numeric - self.alpha_star_formula) / self.alpha_star_formula


def fs_crossing(d: int, n: float, alpha_range: tuple[float, float] | None = None,
                N: int = 2000, bisect_tol: float = 1e-5) -> FsCrossing:
    """Bisect the k = 1 bottom-eigenvalue sign change along a fixed-(d, n) path.

    Positive eigenvalue (stable radial extremal) below the threshold,
    negative above; NoSignChange when the bracket excludes the crossing or
    the whole path is inadmissible (e.g. n = d sits on the p = 2* edge).
    """
    formula = math.sqrt((d - 1.0) / (n - 1.0))
    if alpha_range is None:
        alpha_range = (0.7 * formula, 1.3 * formula)
    lo, hi = float(alpha_range[0]), float(alpha_range[1])

    def eig(alpha: float) -> float:
        try:
            ps = path_params(d, n, alpha)
        except AdmissibilityError as exc:
            raise NoSignChange(
                f"path (d={d}, n={n}) is not strictly admissible at alpha={alpha}: {exc}"
            ) from exc
        return lowest_eigenvalue(build_sector_operator(ps, k=1, N=N))

    f_lo, f_hi = eig(lo), eig(hi)
    if not (f_lo > 0.0 > f_hi):
        raise NoSignChange(
            f"no stable-to-unstable crossing in alpha bracket ({lo}, {hi}): "
            f"eigenvalues ({f_lo:.3e}, {f_hi:.3e})"
        )
    while hi - lo > bisect_tol:
        mid = 0.5 * (lo + hi)
        if eig(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    alpha_star = 0.5 * (lo + hi)
    ps_star = path_params(d, n, alpha_star)
    return FsCrossing(alpha_star_numeric=alpha_star, alpha_star_formula=formula,
                      d=d, n=n, a_at_crossing=ps_star.a)
