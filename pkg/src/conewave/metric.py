"""Exact conical metric in Cartesian and cylindrical form.

The metric has bounded measurable components degenerating only on the
axis {(x, y) = (0, 0)}; every operation on the exact metric therefore
rejects axis points instead of inventing a value there.  Smooth
replacements defined on the whole plane live in :mod:`conewave.mollify`.

Points are plain array-likes: spacetime points are ``(t, x, y, z)``,
spatial points ``(x, y, z)``.  Metric values are returned as symmetric
numpy arrays of shape (4, 4) or (3, 3).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class AxisError(ValueError):
    """Evaluation of the exact metric on the degenerate axis (x, y) = (0, 0)."""


class QuadratureError(RuntimeError):
    """A quadrature failed its internal refinement check."""


@dataclass(frozen=True)
class ConicalParams:
    """Deficit parameter of the cone.

    alpha = 1 is admitted as the flat (Minkowski) limit even though the
    proper cone has alpha < 1; it supplies the exact oracle for solver
    validation.
    """

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")


def _check_off_axis(x, y):
    if np.any((np.asarray(x) == 0.0) & (np.asarray(y) == 0.0)):
        raise AxisError("point on the axis (x, y) = (0, 0)")


def angular_components(x, y):
    """Components (f1, f2) = (cos 2th, sin 2th) of the unit double-angle field.

    f1 = (x^2 - y^2)/(x^2 + y^2), f2 = 2xy/(x^2 + y^2); accepts scalars or
    arrays, raises AxisError if any point is the origin.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_off_axis(x, y)
    r2 = x * x + y * y
    f1 = (x * x - y * y) / r2
    f2 = 2.0 * x * y / r2
    if f1.ndim == 0:
        return float(f1), float(f2)
    return f1, f2


def grad_angular_components(x, y):
    """Classical pointwise gradients of f1 and f2, valid off the origin.

    Returns (df1_dx, df1_dy, df2_dx, df2_dy).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_off_axis(x, y)
    r2 = x * x + y * y
    r4 = r2 * r2
    df1x = 4.0 * x * y * y / r4
    df1y = -4.0 * x * x * y / r4
    df2x = 2.0 * y * (y * y - x * x) / r4
    df2y = 2.0 * x * (x * x - y * y) / r4
    return df1x, df1y, df2x, df2y


def metric_cartesian(p, params: ConicalParams) -> np.ndarray:
    """Metric matrix at the spacetime point p = (t, x, y, z), off axis."""
    _, x, y, _ = np.asarray(p, dtype=float)
    f1, f2 = angular_components(x, y)
    a2 = params.alpha ** 2
    sym = 0.5 * (1.0 + a2)
    dev = 0.5 * (1.0 - a2)
    g = np.zeros((4, 4))
    g[0, 0] = -1.0
    g[1, 1] = sym + dev * f1
    g[2, 2] = sym - dev * f1
    g[1, 2] = g[2, 1] = dev * f2
    g[3, 3] = 1.0
    return g


def metric_cylindrical(t, r, phi, z, params: ConicalParams):
    """diag(-1, 1, alpha^2 r^2, 1) at radius r >= 0.

    Returns (matrix, degenerate); r = 0 is admitted as the continuous
    extension, flagged degenerate.  r < 0 is a domain error.
    """
    if r < 0.0:
        raise ValueError(f"radius must be >= 0, got {r}")
    g = np.diag([-1.0, 1.0, (params.alpha * r) ** 2, 1.0])
    return g, r == 0.0


def cylindrical_to_cartesian(t, r, phi, z):
    return np.array([t, r * np.cos(phi), r * np.sin(phi), z])


def pullback_residual(t, r, phi, z, params: ConicalParams) -> float:
    """Max-norm defect of J^T G(Phi(p)) J = diag(-1, 1, alpha^2 r^2, 1).

    J is the explicit Jacobian of Phi(t, r, phi, z) = (t, r cos phi,
    r sin phi, z); the identity holds exactly for r > 0, so the returned
    value measures rounding only.
    """
    if r <= 0.0:
        raise ValueError(f"radius must be > 0, got {r}")
    c, s = np.cos(phi), np.sin(phi)
    jac = np.array([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, c, -r * s, 0.0],
        [0.0, s, r * c, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    g = metric_cartesian(cylindrical_to_cartesian(t, r, phi, z), params)
    target = np.diag([-1.0, 1.0, (params.alpha * r) ** 2, 1.0])
    return float(np.max(np.abs(jac.T @ g @ jac - target)))


def split_metric(p, params: ConicalParams):
    """Split g into the constant part eta and the unit-eigenvalue defect h.

    eta = diag(-1, (1+a^2)/2, (1+a^2)/2, 1); h carries the (x, y) block
    [[f1, f2], [f2, -f1]]; eta + (1-a^2)/2 * h reassembles g exactly.
    """
    _, x, y, _ = np.asarray(p, dtype=float)
    f1, f2 = angular_components(x, y)
    sym = 0.5 * (1.0 + params.alpha ** 2)
    eta = np.diag([-1.0, sym, sym, 1.0])
    h = np.zeros((4, 4))
    h[1, 1] = f1
    h[2, 2] = -f1
    h[1, 2] = h[2, 1] = f2
    return eta, h


def spatial_metric(p_spatial, params: ConicalParams) -> np.ndarray:
    """Spatial block rho of the metric at (x, y, z), off axis."""
    x, y, _ = np.asarray(p_spatial, dtype=float)
    f1, f2 = angular_components(x, y)
    a2 = params.alpha ** 2
    sym = 0.5 * (1.0 + a2)
    dev = 0.5 * (1.0 - a2)
    rho = np.zeros((3, 3))
    rho[0, 0] = sym + dev * f1
    rho[1, 1] = sym - dev * f1
    rho[0, 1] = rho[1, 0] = dev * f2
    rho[2, 2] = 1.0
    return rho


def spatial_quadratic_form(x, y, v1, v2, v3, params: ConicalParams):
    """rho(v, v) evaluated directly; broadcasts over arrays of points/vectors."""
    f1, f2 = angular_components(x, y)
    a2 = params.alpha ** 2
    planar = v1 * v1 + v2 * v2
    return (0.5 * (1.0 + a2) * planar
            + 0.5 * (1.0 - a2) * (f1 * (v1 * v1 - v2 * v2) + 2.0 * f2 * v1 * v2)
            + v3 * v3)


def lower_bound_margin(p_spatial, v, params: ConicalParams):
    """rho(v, v) - [alpha^2 (v1^2 + v2^2) + v3^2]; nonnegative up to rounding.

    The bound is tight on angular directions, where the margin vanishes.
    """
    x, y, _ = np.asarray(p_spatial, dtype=float)
    v1, v2, v3 = np.asarray(v, dtype=float)
    a2 = params.alpha ** 2
    q = spatial_quadratic_form(x, y, v1, v2, v3, params)
    return float(q - (a2 * (v1 * v1 + v2 * v2) + v3 * v3))


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor polar grid for the annulus integrals: geometric radial spacing
    (uniform in log r) by uniform angular nodes, with one refinement check."""

    n_r: int = 256
    n_theta: int = 256
    refine_tol: float = 1e-6


@dataclass(frozen=True)
class SobolevMasses:
    l1_mass: float
    l2_mass: float
    r_inner: float
    refine_residual_l1: float
    refine_residual_l2: float


def _annulus_masses(r_inner: float, n_r: int, n_theta: int):
    from scipy.integrate import simpson

    # log-radial substitution r = e^u renders |grad f|^2 * r constant in u
    u = np.linspace(np.log(r_inner), 0.0, 2 * (n_r // 2) + 1)
    r = np.exp(u)
    # integrate each quarter separately: |xy| kinks sit on quarter boundaries
    l1 = 0.0
    l2 = 0.0
    for k in range(4):
        th = np.linspace(k * np.pi / 2, (k + 1) * np.pi / 2,
                         2 * (n_theta // 2) + 1)
        x = r[:, None] * np.cos(th)[None, :]
        y = r[:, None] * np.sin(th)[None, :]
        df1x, df1y, _, _ = grad_angular_components(x, y)
        gnorm = np.hypot(df1x, df1y)
        # area element r dr dth = r^2 du dth
        w = r[:, None] ** 2
        l1 += simpson(simpson(gnorm * w, x=th, axis=1), x=u)
        l2 += simpson(simpson(gnorm ** 2 * w, x=th, axis=1), x=u)
    return l1, l2


def sobolev_probe(r_inner: float, spec: QuadratureSpec = QuadratureSpec()):
    """Annulus masses of |grad f1| and |grad f1|^2 over r_inner < |x| < 1.

    The first stays bounded as r_inner -> 0 while the second grows like
    log(1/r_inner), which is the integrability gap probed here.
    """
    if not (0.0 < r_inner < 1.0):
        raise ValueError(f"r_inner must lie in (0, 1), got {r_inner}")
    l1, l2 = _annulus_masses(r_inner, spec.n_r, spec.n_theta)
    l1f, l2f = _annulus_masses(r_inner, 2 * spec.n_r, 2 * spec.n_theta)
    res1 = abs(l1f - l1) / (1.0 + abs(l1f))
    res2 = abs(l2f - l2) / (1.0 + abs(l2f))
    if res1 > spec.refine_tol or res2 > spec.refine_tol:
        raise QuadratureError(
            f"annulus quadrature did not settle: residuals ({res1:.3e}, {res2:.3e}) "
            f"at r_inner={r_inner}, grid ({spec.n_r}, {spec.n_theta})")
    return SobolevMasses(l1f, l2f, r_inner, res1, res2)
