"""Topologies on spaces of parametrized curves and their image classes.

Parametrized curves live on [0, 1] under the metric of uniform
convergence; classes of curves modulo orientation-preserving
reparametrization are identified with their images, represented as node
polylines with a tolerance in place of set equality.  The bridge between
the two pictures is the constant-speed representative: every rectifiable
curve has exactly one parametrization on [0, 1] whose speed equals its
length everywhere, and the class map sends a curve to the class of that
representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import interpolate

from .causal import PreconditionError, SampledCurve, arclength
from .metric import ConicalParams


class ParamCurve01(SampledCurve):
    """A sampled curve with parameter domain [0, 1]."""

    def __init__(self, s, points, velocities=None):
        super().__init__(s, points, velocities)
        if abs(self.s[0]) > 1e-12 or abs(self.s[-1] - 1.0) > 1e-12:
            raise ValueError("parameter domain must be [0, 1]")

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def node_speeds(self) -> np.ndarray:
        return np.linalg.norm(self.velocities, axis=1)

    def is_constant_speed(self, rel_tol: float = 1e-6) -> bool:
        sp = self.node_speeds()
        return float(sp.max() / sp.min()) <= 1.0 + rel_tol


def proportional_reparam(curve: SampledCurve,
                         riemann_metric: Optional[Callable] = None,
                         n_nodes: Optional[int] = None) -> ParamCurve01:
    """The unique parametrization on [0, 1] proportional to arclength.

    The output has constant node speed equal to the curve length;
    applying it twice reproduces the first output up to interpolation
    error, and any two parametrizations of the same image map to the
    same output.
    """
    pts_ends = np.asarray(curve.points)
    if np.allclose(pts_ends[0], pts_ends[-1], atol=1e-14):
        raise ValueError("curve endpoints coincide; no proportional parametrization")
    cum = arclength(curve, riemann_metric)
    total = cum[-1]
    if total <= 0.0:
        raise ValueError("zero-length curve")
    n_out = n_nodes or curve.n_nodes
    spline = interpolate.CubicSpline(curve.s, cum)
    s_fine = np.linspace(curve.s[0], curve.s[-1], 8 * curve.n_nodes + 1)
    inv = interpolate.PchipInterpolator(spline(s_fine), s_fine)
    tau = np.linspace(0.0, 1.0, n_out)
    s_new = inv(tau * total)
    s_new[0], s_new[-1] = curve.s[0], curve.s[-1]
    pts = curve(s_new)
    vel = curve.velocity(s_new)
    if riemann_metric is None:
        norms = np.linalg.norm(vel, axis=1)
    else:
        norms = np.array([np.sqrt(max(v @ riemann_metric(p) @ v, 0.0))
                          for p, v in zip(pts, vel)])
    return ParamCurve01(tau, pts, vel * (total / norms)[:, None])


def uniform_distance(a: ParamCurve01, b: ParamCurve01,
                     point_distance: Optional[Callable] = None) -> float:
    """sup over the joint node set of the distance between matched points.

    This is a metric on parametrized curves: equal images under different
    parametrizations generally have positive distance.
    """
    grid = np.union1d(a.s, b.s)
    pa, pb = a(grid), b(grid)
    if point_distance is None:
        return float(np.max(np.linalg.norm(pa - pb, axis=1)))
    return float(max(point_distance(p, q) for p, q in zip(pa, pb)))


def box_lipschitz_constant(box, params: ConicalParams) -> float:
    """Lipschitz constant valid for every constant-speed causal curve in box.

    The time component of a causal curve dominates alpha times the
    Euclidean spatial speed, so the constant speed (= length) is at most
    the box time extent times sqrt(1 + 1/alpha^2).
    """
    lo, hi = np.asarray(box[0], dtype=float), np.asarray(box[1], dtype=float)
    t_extent = hi[0] - lo[0]
    return float(t_extent * np.sqrt(1.0 + params.alpha ** -2))


def _in_box(points: np.ndarray, box, tol: float = 1e-9) -> bool:
    lo, hi = np.asarray(box[0], dtype=float), np.asarray(box[1], dtype=float)
    return bool(np.all(points >= lo - tol) and np.all(points <= hi + tol))


def lipschitz_bound(curve: ParamCurve01, compact_box) -> float:
    """Empirical Lipschitz constant (max node speed) of a curve in the box."""
    if not _in_box(curve.points, compact_box):
        raise PreconditionError("curve image leaves the given box")
    return float(curve.node_speeds().max())


def polyline_distance(points: np.ndarray, polyline: np.ndarray) -> float:
    """Max over points of the distance to the polyline (one-sided Hausdorff)."""
    points = np.asarray(points, dtype=float)
    polyline = np.asarray(polyline, dtype=float)
    a = polyline[:-1]
    d = np.diff(polyline, axis=0)
    dd = np.maximum(np.einsum("kj,kj->k", d, d), 1e-300)
    worst = 0.0
    for chunk in np.array_split(points, max(1, points.shape[0] // 256)):
        diff = chunk[:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("mkj,kj->mk", diff, d) / dd[None, :], 0.0, 1.0)
        proj = diff - t[:, :, None] * d[None, :, :]
        dist = np.sqrt(np.einsum("mkj,mkj->mk", proj, proj)).min(axis=1)
        worst = max(worst, float(dist.max()))
    return worst


@dataclass
class CurveClass:
    """An image class: a curve modulo orientation-preserving reparametrization.

    The canonical representative is the constant-speed parametrization on
    [0, 1]; two classes are equal when each image lies within tolerance of
    the other's polyline.
    """

    canonical: ParamCurve01

    @property
    def image(self) -> np.ndarray:
        return self.canonical.points

    @property
    def length(self) -> float:
        return float(self.canonical.node_speeds().mean())

    @property
    def endpoints(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.canonical.start, self.canonical.end

    def same_class(self, other: "CurveClass", tol: float = 1e-8) -> bool:
        return (polyline_distance(self.image, other.image) <= tol
                and polyline_distance(other.image, self.image) <= tol)


def image_subset_check(a: CurveClass, b: CurveClass, tol: float = 1e-8) -> bool:
    """Whether a's image lies within tol of b's polyline.

    Requires shared endpoints; for causal classes a positive answer
    forces class equality, which is what the corpus tests exercise.
    """
    pa, qa = a.endpoints
    pb, qb = b.endpoints
    if not (np.allclose(pa, pb, atol=tol) and np.allclose(qa, qb, atol=tol)):
        raise PreconditionError("classes do not share endpoints")
    return polyline_distance(a.image, b.image) <= tol


def to_image_class(curve: SampledCurve,
                   riemann_metric: Optional[Callable] = None) -> CurveClass:
    """Class of a curve, keyed by its constant-speed representative."""
    if isinstance(curve, ParamCurve01) and curve.is_constant_speed():
        return CurveClass(curve)
    return CurveClass(proportional_reparam(curve, riemann_metric))


def _dyadic_order(n: int) -> List[int]:
    """0, n-1, then midpoints level by level: a dense enumeration of the grid."""
    seen = [0, n - 1]
    intervals = [(0, n - 1)]
    while intervals:
        nxt = []
        for a, b in intervals:
            m = (a + b) // 2
            if m != a and m != b:
                seen.append(m)
                nxt += [(a, m), (m, b)]
        intervals = nxt
    return seen


@dataclass(frozen=True)
class ExtractionResult:
    indices: Tuple[int, ...]
    limit: ParamCurve01
    cauchy_gaps: Tuple[float, ...]   # uniform distances of consecutive survivors
    lipschitz_sup: float


def arzela_ascoli_extract(family: Sequence[ParamCurve01], box,
                          target_size: int = 4,
                          lipschitz_cap: Optional[float] = None
                          ) -> ExtractionResult:
    """Extract a uniformly convergent subsequence from an equibounded family.

    Finite-family version of the diagonal argument: walk a dense (dyadic)
    enumeration of parameters and at each one keep the half of the
    surviving curves whose values cluster tightest, until only
    target_size survive.  The node-wise limit is estimated by the last
    survivor (deepest member of the net).
    """
    if len(family) == 0:
        raise ValueError("empty family")
    for i, c in enumerate(family):
        if not _in_box(c.points, box):
            raise PreconditionError(f"family member {i} leaves the box")
    sup_lip = max(float(c.node_speeds().max()) for c in family)
    if lipschitz_cap is not None and sup_lip > lipschitz_cap:
        raise PreconditionError(
            f"family exceeds Lipschitz cap: sup speed {sup_lip} > {lipschitz_cap}")

    m = max(c.n_nodes for c in family)
    grid = np.linspace(0.0, 1.0, m)
    values = np.stack([c(grid) for c in family])   # (n_curves, m, 4)

    idx = list(range(len(family)))
    for j in _dyadic_order(m):
        if len(idx) <= target_size:
            break
        vals = values[idx, j, :]
        center = np.median(vals, axis=0)
        d = np.linalg.norm(vals - center, axis=1)
        cut = np.median(d)
        keep = [i for i, di in zip(idx, d) if di <= cut + 1e-300]
        if 0 < len(keep) < len(idx):
            idx = keep
    gaps = tuple(
        float(np.max(np.linalg.norm(values[b, :, :] - values[a, :, :], axis=1)))
        for a, b in zip(idx[:-1], idx[1:]))
    last = family[idx[-1]]
    limit01 = ParamCurve01(grid, last(grid), last.velocity(grid))
    return ExtractionResult(tuple(idx), limit01, gaps, sup_lip)
