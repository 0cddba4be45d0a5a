"""Causal classification of tangents and curves, slice crossing, arclength.

Curves are sampled on a strictly increasing parameter grid with node
derivatives and a cubic Hermite interpolant in between; the interpolant
is the curve as far as every operation here is concerned.  "Almost
everywhere" conditions are operationalized at grid nodes, with axis
nodes (where the exact metric is undefined) skipped and reported.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy import interpolate, optimize

from .metric import AxisError, ConicalParams, metric_cartesian
from .mollify import RegularizedField, beta as lowerbound_beta

NULL_TOL = 1e-12


class PreconditionError(ValueError):
    """An operation's precondition failed on concrete data."""


class CausalClass(enum.Enum):
    TIMELIKE = "timelike"
    NULL = "null"
    SPACELIKE = "spacelike"
    MIXED = "mixed"


class SampledCurve:
    """A regular curve R -> R^4 sampled on a grid, with cubic Hermite model.

    Node derivatives may be supplied; otherwise they are taken from a
    cubic spline through the points.  Regularity (nonvanishing velocity
    at every node) is enforced at construction.
    """

    def __init__(self, s: np.ndarray, points: np.ndarray,
                 velocities: Optional[np.ndarray] = None):
        s = np.asarray(s, dtype=float)
        points = np.asarray(points, dtype=float)
        if s.ndim != 1 or np.any(np.diff(s) <= 0.0):
            raise ValueError("parameter grid must be strictly increasing")
        if points.shape != (s.size, 4):
            raise ValueError(f"points must have shape ({s.size}, 4)")
        if velocities is None:
            velocities = interpolate.CubicSpline(s, points, axis=0)(s, 1)
        else:
            velocities = np.asarray(velocities, dtype=float)
            if velocities.shape != points.shape:
                raise ValueError("velocities shape must match points")
        speeds = np.linalg.norm(velocities, axis=1)
        if np.any(speeds == 0.0):
            raise ValueError("curve is not regular: zero velocity at a node")
        self.s = s
        self.points = points
        self.velocities = velocities
        self._interp = interpolate.CubicHermiteSpline(s, points, velocities,
                                                      axis=0)

    @classmethod
    def from_function(cls, fn: Callable, s: np.ndarray,
                      dfn: Optional[Callable] = None) -> "SampledCurve":
        s = np.asarray(s, dtype=float)
        pts = np.array([fn(v) for v in s], dtype=float)
        vel = None if dfn is None else np.array([dfn(v) for v in s], dtype=float)
        return cls(s, pts, vel)

    @property
    def n_nodes(self) -> int:
        return self.s.size

    def __call__(self, s):
        return self._interp(s)

    def velocity(self, s):
        return self._interp(s, 1)

    def time_component(self, s):
        return self._interp(s)[..., 0] if np.ndim(s) else self._interp(s)[0]


@dataclass
class CurveFamily:
    """An eps-indexed net of sampled curves on a shared truncated window."""

    members: Dict[float, SampledCurve]

    def __post_init__(self):
        if not self.members:
            raise ValueError("family must have at least one member")

    @property
    def eps_values(self) -> List[float]:
        return sorted(self.members, reverse=True)

    def image_radii(self) -> Dict[float, float]:
        """Per-eps sup norm of sampled image points."""
        return {e: float(np.max(np.abs(c.points)))
                for e, c in self.members.items()}

    def c_bounded(self, divergence_ratio: float = 4.0) -> bool:
        """Proxy for "all images inside one compact set".

        A finite net is always inside some compact set; what can diverge
        is the trend along eps -> 0.  The flag is False when image radii
        grow monotonically by more than divergence_ratio across the net.
        """
        eps = self.eps_values
        radii = self.image_radii()
        vals = [radii[e] for e in eps]
        growing = all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        return not (growing and vals[-1] > divergence_ratio * max(vals[0], 1e-300))


@dataclass(frozen=True)
class TangentClassification:
    value: float
    causal_class: CausalClass
    future: Optional[bool]      # None for spacelike vectors
    degenerate_metric: bool = False


def classify_tangent(metric: np.ndarray, v, tol: float = NULL_TOL
                     ) -> TangentClassification:
    """Sign classification of g(v, v) with the (1,0,0,0) time orientation.

    Values within tol of zero are reported 'null within tolerance'; no
    semantic commitment is made for nonzero vectors with g(v, v) = 0
    beyond that label.  A singular metric matrix is flagged, not raised.
    """
    v = np.asarray(v, dtype=float)
    val = float(v @ metric @ v)
    if val < -tol:
        cls = CausalClass.TIMELIKE
    elif val > tol:
        cls = CausalClass.SPACELIKE
    else:
        cls = CausalClass.NULL
    future = None
    if cls is not CausalClass.SPACELIKE and v[0] != 0.0:
        future = bool(v[0] > 0.0)
    degenerate = bool(abs(np.linalg.det(metric)) < tol)
    return TangentClassification(val, cls, future, degenerate)


@dataclass(frozen=True)
class CurveProfile:
    values: np.ndarray            # g(gdot, gdot) at evaluated nodes (nan = skipped)
    causal_class: CausalClass
    skipped_nodes: tuple          # node indices on the axis


def curve_causal_profile(curve: SampledCurve, metric_eval: Callable,
                         tol: float = NULL_TOL) -> CurveProfile:
    """Per-node g(gdot, gdot) along the curve plus an overall classification.

    metric_eval maps a spacetime point to a 4x4 matrix and may raise
    AxisError; axis nodes are skipped and reported, a curve with no
    evaluable node at all is a domain error.
    """
    vals = np.full(curve.n_nodes, np.nan)
    skipped = []
    for i in range(curve.n_nodes):
        try:
            g = metric_eval(curve.points[i])
        except AxisError:
            skipped.append(i)
            continue
        vals[i] = curve.velocities[i] @ g @ curve.velocities[i]
    ok = ~np.isnan(vals)
    if not np.any(ok):
        raise AxisError("curve lies entirely on the axis")
    v = vals[ok]
    if np.all(v < -tol):
        cls = CausalClass.TIMELIKE
    elif np.all(v > tol):
        cls = CausalClass.SPACELIKE
    elif np.all(np.abs(v) <= tol):
        cls = CausalClass.NULL
    else:
        cls = CausalClass.MIXED
    return CurveProfile(vals, cls, tuple(skipped))


def _roots_of_shifted(curve: SampledCurve, t0: float, s_tol: float = 1e-12):
    """All parameters with gamma_0(s) = t0, from sign changes of the interpolant."""
    t_nodes = curve.points[:, 0] - t0
    roots = []
    for i, (a, b) in enumerate(zip(t_nodes[:-1], t_nodes[1:])):
        if a == 0.0:
            roots.append(curve.s[i])
        if a * b < 0.0:
            f = lambda s: curve(s)[0] - t0
            roots.append(optimize.brentq(f, curve.s[i], curve.s[i + 1],
                                         xtol=s_tol))
    if t_nodes[-1] == 0.0:
        roots.append(curve.s[-1])
    return roots


@dataclass(frozen=True)
class CrossingReport:
    t0: float
    roots: tuple
    in_range: bool
    inequality_min_slack: float   # min over node pairs of |dT| - alpha |dL|


def cauchy_crossing(curve: SampledCurve, t0: float, params: ConicalParams,
                    profile: Optional[CurveProfile] = None) -> CrossingReport:
    """Crossings of the slice {t = t0} by a timelike curve.

    Timelike curves cross at most once because the time component
    dominates alpha times the Euclidean spatial speed; the report also
    carries the worst slack of that inequality over all node pairs.
    """
    if profile is None:
        profile = curve_causal_profile(
            curve, lambda p: metric_cartesian(p, params))
    if profile.causal_class is not CausalClass.TIMELIKE:
        raise PreconditionError(
            f"cauchy_crossing needs a timelike curve, got {profile.causal_class}")
    roots = _roots_of_shifted(curve, t0)
    t_vals = curve.points[:, 0]
    in_range = min(t_vals) <= t0 <= max(t_vals)

    spatial_speed = np.linalg.norm(curve.velocities[:, 1:], axis=1)
    arc = np.concatenate([[0.0], np.cumsum(
        0.5 * (spatial_speed[1:] + spatial_speed[:-1]) * np.diff(curve.s))])
    drift = t_vals - t_vals[0]
    # |T(s)-T(s0)| >= alpha |L(s)-L(s0)|: with monotone T this is a prefix scan
    sgn = 1.0 if t_vals[-1] >= t_vals[0] else -1.0
    d = sgn * drift - params.alpha * arc
    running_max = np.maximum.accumulate(d[:-1])
    min_slack = float(np.min(d[1:] - running_max))
    return CrossingReport(t0, tuple(roots), in_range, min_slack)


def _euclidean4(_p):
    return np.eye(4)


def arclength(curve: SampledCurve, riemann_metric: Optional[Callable] = None,
              n_gauss: int = 6) -> np.ndarray:
    """Cumulative arclength of the interpolant at the curve's nodes.

    riemann_metric maps a point to a positive matrix (default Euclidean).
    Per-interval Gauss quadrature of the interpolant speed; strictly
    increasing for regular curves.  An unbounded sampled range is the
    working proxy for inextendibility, a bounded one for extendibility.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_gauss)
    a, b = curve.s[:-1], curve.s[1:]
    half = 0.5 * (b - a)
    sq = a[:, None] + half[:, None] * (nodes[None, :] + 1.0)
    vel = curve.velocity(sq.reshape(-1))
    if riemann_metric is None:
        vals = np.einsum("ij,ij->i", vel, vel)
    else:
        pts = curve(sq.reshape(-1))
        vals = np.array([v @ riemann_metric(p) @ v for p, v in zip(pts, vel)])
    if np.any(vals <= 0.0):
        i = int(np.argmin(vals))
        raise RuntimeError(
            f"metric not positive along curve at s={sq.reshape(-1)[i]}: {vals[i]}")
    speeds = np.sqrt(vals).reshape(sq.shape)
    seg = half * (speeds @ weights)
    return np.concatenate([[0.0], np.cumsum(seg)])


def unit_speed_reparam(curve: SampledCurve,
                       riemann_metric: Optional[Callable] = None,
                       n_nodes: Optional[int] = None) -> SampledCurve:
    """Reparametrize to unit speed in the given Riemannian metric.

    The new parameter is arclength measured from the old initial node
    (so the domain becomes [0, total length]); node velocities are
    renormalized exactly, making the operation idempotent up to
    interpolation error.
    """
    eta = riemann_metric or _euclidean4
    n_out = n_nodes or curve.n_nodes
    cum = arclength(curve, riemann_metric)
    total = cum[-1]
    # monotone inverse of s -> arclength via PCHIP on a refined sampling
    refine = interpolate.CubicSpline(curve.s, cum)
    s_fine = np.linspace(curve.s[0], curve.s[-1], 4 * curve.n_nodes + 1)
    l_fine = refine(s_fine)
    inv = interpolate.PchipInterpolator(l_fine, s_fine)
    targets = np.linspace(0.0, total, n_out)
    s_new = inv(targets)
    s_new[0], s_new[-1] = curve.s[0], curve.s[-1]
    pts = curve(s_new)
    vel = curve.velocity(s_new)
    norms = np.array([np.sqrt(max(v @ eta(p) @ v, 0.0))
                      for p, v in zip(pts, vel)])
    if np.any(norms == 0.0):
        raise RuntimeError("vanishing speed encountered during reparametrization")
    return SampledCurve(targets, pts, vel / norms[:, None])


@dataclass(frozen=True)
class FamilyCrossingReport:
    q_exponent: float
    beta: float
    crossing_params: Dict[float, float]        # eps -> s_eps
    crossing_points: Dict[float, np.ndarray]   # eps -> gamma_eps(s_eps)
    star_min_slack: float        # min of gdot_0^2/beta - |gdot_1|^2 over nodes
    starstar_min_slack: float    # min of gdot_0^2 - beta/(2(beta+1)) over nodes
    c_bound_max_violation: float  # max of |s_eps| - |g0(0)| sqrt(2(b+1)/b)
    c_bounded: bool
    spatial_bounding_box: np.ndarray  # (2, 3) min/max over crossing points


def family_crossing(family: CurveFamily, field: RegularizedField,
                    q_exponent: float = 0.0,
                    beta_value: Optional[float] = None,
                    unit_speed_tol: float = 1e-8,
                    timelike_tol: float = 1e-9) -> FamilyCrossingReport:
    """Crossing of the slice {t = 0} by an eps-family of unit-speed curves.

    Preconditions, checked at every node of every member: Euclidean unit
    speed, and the uniform strict-timelike bound g_eps(gdot, gdot) <=
    -eps^q.  The report carries the unique crossing parameter and point
    per member together with the slack of the derived bounds

        |gdot_1|^2 <= gdot_0^2 / beta
        gdot_0^2   >= beta / (2 (beta + 1))
        |s_eps|    <= |gamma_0^eps(0)| sqrt(2 (beta + 1) / beta)

    where beta is capped at 1 as in the underlying estimate.
    """
    if beta_value is None:
        betas = [lowerbound_beta(field.params, field.mollifier, e)
                 for e in family.eps_values]
        if any(bv is None for bv in betas):
            raise PreconditionError("inadmissible (alpha, mollifier) pair")
        beta_value = min(betas)
    if beta_value <= 0.0:
        raise PreconditionError("inadmissible (alpha, mollifier) pair")
    b = min(1.0, beta_value)

    crossing_params: Dict[float, float] = {}
    crossing_points: Dict[float, np.ndarray] = {}
    star = np.inf
    starstar = np.inf
    c_violation = -np.inf
    for eps in family.eps_values:
        curve = family.members[eps]
        vel = curve.velocities
        e_speed = np.einsum("ij,ij->i", vel, vel)
        bad = np.abs(e_speed - 1.0) > unit_speed_tol
        if np.any(bad):
            i = int(np.argmax(np.abs(e_speed - 1.0)))
            raise PreconditionError(
                f"member eps={eps} not unit speed at s={curve.s[i]}: "
                f"e(gdot,gdot)={e_speed[i]}")
        gvals = np.array([
            v @ field.metric(eps, p) @ v
            for p, v in zip(curve.points, vel)])
        limit = -eps ** q_exponent
        if np.any(gvals > limit + timelike_tol):
            i = int(np.argmax(gvals))
            raise PreconditionError(
                f"uniform timelike bound violated at (eps={eps}, s={curve.s[i]}): "
                f"g(gdot,gdot)={gvals[i]} > {limit}")
        roots = _roots_of_shifted(curve, 0.0)
        if len(roots) != 1:
            raise PreconditionError(
                f"member eps={eps} crosses t=0 {len(roots)} times on the window")
        s_eps = roots[0]
        crossing_params[eps] = float(s_eps)
        crossing_points[eps] = np.asarray(curve(s_eps), dtype=float)

        dot0sq = vel[:, 0] ** 2
        spatial_sq = np.einsum("ij,ij->i", vel[:, 1:], vel[:, 1:])
        star = min(star, float(np.min(dot0sq / b - spatial_sq)))
        starstar = min(starstar, float(np.min(dot0sq - b / (2.0 * (b + 1.0)))))
        t_at_zero = float(curve(0.0)[0])
        bound = abs(t_at_zero) * np.sqrt(2.0 * (b + 1.0) / b)
        c_violation = max(c_violation, abs(s_eps) - bound)

    pts = np.array([crossing_points[e][1:] for e in family.eps_values])
    box = np.vstack([pts.min(axis=0), pts.max(axis=0)])
    return FamilyCrossingReport(q_exponent, b, crossing_params, crossing_points,
                                star, starstar, float(c_violation),
                                family.c_bounded(), box)
