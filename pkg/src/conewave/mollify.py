"""Mollifier catalog and convolution regularization of the conical metric.

Only the bounded components f1, f2 need smoothing; everything else in the
metric is constant.  Convolving the unit double-angle field with a radial
mollifier keeps its angular structure, so the smoothed field is

    f1_eps + i f2_eps = e^{2 i theta} R(r / eps)

with a single real radial response R.  A RegularizedField caches R on a
dense grid (one cache for scale-invariant variants, one per eps for the
strict-net variant) and serves all pointwise evaluations from a spline
plus an asymptotic tail; a direct 2D quadrature path that never uses the
angular reduction is kept as the cross-validation oracle.

The admissibility constants:

    c = (||phi||_1 - 1) / (||phi||_1 + 1)
    2 beta = 1 - ||phi||_1 + alpha^2 (1 + ||phi||_1)

decide whether the smoothed spatial metric stays uniformly positive,
rho_eps(v, v) >= beta (v1^2 + v2^2) + v3^2, for every eps.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate, interpolate

from .metric import ConicalParams, QuadratureError


class MollifierVariant(enum.Enum):
    NONNEGATIVE = "A"        # phi >= 0, unit L1 norm
    MOMENT_CORRECTED = "B"   # signed, vanishing second moments, L1 norm > 1
    STRICT_NET = "C"         # per-eps profile with L1 norm -> 1


@dataclass
class MollifierSpec:
    """A 2D radial mollifier phi(x, y) = P(|(x, y)|) with unit integral.

    For the strict-net variant the base profile depends on eps and is
    produced by ``net``; ``l1_norm`` then holds None and ``l1_at(eps)``
    must be used.
    """

    variant: MollifierVariant
    label: str
    profile: Optional[Callable] = None          # vectorized P(s)
    support_radius: float = np.inf              # beyond this P is ~0
    l1_norm: Optional[float] = None
    moment_order: int = 0
    net: Optional[Callable] = None              # eps -> (profile, support_radius)
    breakpoints: tuple = ()                     # support edges, quadrature hints
    _l1_cache: dict = field(default_factory=dict, repr=False)

    def profile_at(self, eps: Optional[float] = None):
        if self.variant is MollifierVariant.STRICT_NET:
            if eps is None:
                raise ValueError("strict-net mollifier needs eps")
            return self.net(eps)
        return self.profile, self.support_radius

    def l1_at(self, eps: Optional[float] = None) -> float:
        if self.variant is not MollifierVariant.STRICT_NET:
            return self.l1_norm
        if eps not in self._l1_cache:
            prof, supp = self.net(eps)
            self._l1_cache[eps] = _radial_l1(prof, supp, self.breakpoints)
        return self._l1_cache[eps]


def _radial_integral(fn, support: float, breaks=(), lo: float = 0.0) -> float:
    """Integral of fn over [lo, support] with subdivision hints at breaks."""
    if np.isfinite(support):
        pts = [b for b in breaks if lo < b < support] or None
        val, err = integrate.quad(fn, lo, support, points=pts,
                                  limit=800, epsabs=1e-13, epsrel=1e-12)
    else:
        val, err = integrate.quad(fn, lo, 30.0, limit=800,
                                  epsabs=1e-13, epsrel=1e-12)
    if not np.isfinite(val) or err > max(1e-10, 1e-8 * abs(val)):
        raise QuadratureError(f"radial profile integral unreliable: {val} +- {err}")
    return val


def _radial_mass(profile, support: float, breaks=(), lo: float = 0.0) -> float:
    return _radial_integral(lambda s: 2.0 * np.pi * profile(s) * s,
                            support, breaks, lo)


def _radial_l1(profile, support: float, breaks=()) -> float:
    return _radial_integral(lambda s: 2.0 * np.pi * np.abs(profile(s)) * s,
                            support, breaks)


def _radial_second_moment(profile, support: float, breaks=()) -> float:
    return _radial_integral(lambda s: 2.0 * np.pi * profile(s) * s ** 3,
                            support, breaks)


def _normalized(profile, support: float, lo: float = 0.0):
    mass = _radial_mass(profile, support, lo=lo)
    return lambda s, _p=profile, _m=mass: _p(s) / _m


def _bump(s, a: float, b: float):
    """Smooth bump on (a, b), zero outside, infinitely flat at both ends."""
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    out = np.zeros_like(s)
    inside = (s > a) & (s < b)
    si = s[inside]
    out[inside] = np.exp(-1.0 / ((si - a) * (b - si)))
    return float(out[0]) if scalar else out


def gaussian_mollifier() -> MollifierSpec:
    """Variant A: normalized Gaussian, P(s) = exp(-s^2)/pi."""
    prof = lambda s: np.exp(-np.square(s)) / np.pi
    return MollifierSpec(MollifierVariant.NONNEGATIVE, "gaussian", prof,
                         support_radius=np.inf, l1_norm=1.0, moment_order=0)


def bump_mollifier() -> MollifierSpec:
    """Variant A: compactly supported radial bump on s < 1."""
    prof = _normalized(lambda s: _bump(s, -1.0, 1.0), 1.0)
    return MollifierSpec(MollifierVariant.NONNEGATIVE, "bump", prof,
                         support_radius=1.0, l1_norm=1.0, moment_order=0)


def moment_corrected_mollifier() -> MollifierSpec:
    """Variant B: Gaussian times (2 - s^2)/pi, which kills the second moments.

    Unit integral and vanishing second moments hold analytically; the L1
    norm is 1 + 2 e^{-2}.
    """
    prof = lambda s: np.exp(-np.square(s)) * (2.0 - np.square(s)) / np.pi
    l1 = 1.0 + 2.0 * np.exp(-2.0)
    return MollifierSpec(MollifierVariant.MOMENT_CORRECTED, "gauss-moment2", prof,
                         support_radius=np.inf, l1_norm=l1, moment_order=2)


def strict_net_mollifier() -> MollifierSpec:
    """Variant C: bump plus an eps-small signed ring pair, ||psi_eps||_1 = 1 + eps.

    The positive and negative rings have unit mass each and disjoint
    supports, so the integral stays 1 while the L1 norm is 1 + eps and
    tends to 1 along the net.
    """
    core = _normalized(lambda s: _bump(s, -1.0, 1.0), 1.0)
    ring_pos = _normalized(lambda s: _bump(s, 1.0, 1.5), 1.5, lo=1.0)
    ring_neg = _normalized(lambda s: _bump(s, 1.5, 2.0), 2.0, lo=1.5)

    def net(eps: float):
        def prof(s, e=eps):
            return core(s) + 0.5 * e * (ring_pos(s) - ring_neg(s))
        return prof, 2.0

    return MollifierSpec(MollifierVariant.STRICT_NET, "bump-ring-net",
                         net=net, moment_order=0, breakpoints=(1.0, 1.5))


MOLLIFIER_FACTORIES = {
    "gaussian": gaussian_mollifier,
    "bump": bump_mollifier,
    "gauss-moment2": moment_corrected_mollifier,
    "bump-ring-net": strict_net_mollifier,
}


def profile_mass(m: MollifierSpec, eps: Optional[float] = None) -> float:
    """Numerical integral of the 2D mollifier; 1 up to quadrature residual."""
    prof, supp = m.profile_at(eps)
    return _radial_mass(prof, supp, m.breakpoints)


def c_phi(m: MollifierSpec, eps: Optional[float] = None) -> float:
    """Admissibility threshold (||phi||_1 - 1)/(||phi||_1 + 1) in [0, 1)."""
    l1 = m.l1_at(eps)
    return (l1 - 1.0) / (l1 + 1.0)


def beta(params: ConicalParams, m: MollifierSpec,
         eps: Optional[float] = None) -> Optional[float]:
    """Uniform spatial lower-bound constant, or None when inadmissible.

    beta = (1 - ||phi||_1 + alpha^2 (1 + ||phi||_1)) / 2, positive exactly
    when alpha^2 > c_phi; inadmissibility is a value, not an error.
    """
    l1 = m.l1_at(eps)
    a2 = params.alpha ** 2
    if a2 <= c_phi(m, eps):
        return None
    return 0.5 * (1.0 - l1 + a2 * (1.0 + l1))


def beta_conservative(params: ConicalParams, m: MollifierSpec,
                      eps: Optional[float] = None) -> Optional[float]:
    """Smaller alternative constant (alpha^2 - c_phi)/(2 (||phi||_1 + 1)).

    Differs from beta() by a factor (||phi||_1 + 1)^2; both are reported
    because the two published formulas disagree, and any positive constant
    below beta() works in the bound.
    """
    l1 = m.l1_at(eps)
    a2 = params.alpha ** 2
    c = c_phi(m, eps)
    if a2 <= c:
        return None
    return (a2 - c) / (2.0 * (l1 + 1.0))


def strict_net_threshold(params: ConicalParams, m: MollifierSpec,
                         eps_hi: float = 1.0, tol: float = 1e-10) -> float:
    """Largest eps at which the strict net is still admissible for alpha.

    Bisection on eps -> alpha^2 - c_phi(eps); below the returned value the
    splitting bound holds, above it fails.  Requires admissibility at some
    small eps (guaranteed: c_phi -> 0 along the net).
    """
    if m.variant is not MollifierVariant.STRICT_NET:
        raise ValueError("threshold search only applies to strict-net mollifiers")
    a2 = params.alpha ** 2
    gap = lambda e: a2 - c_phi(m, e)
    if gap(eps_hi) > 0.0:
        return eps_hi
    lo = eps_hi
    while gap(lo) <= 0.0:
        lo *= 0.5
        if lo < 1e-12:
            raise RuntimeError("no admissible eps found down to 1e-12")
    hi = 2.0 * lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# Radial response of the convolution


def _radial_response(profile, support: float, s_values: np.ndarray,
                     n_rho: int = 200, n_theta: int = 256) -> np.ndarray:
    """R(s) = Re (f * phi)(s e_x) for the unit-scale radial profile.

    Two quadrature charts, both smooth for the catalog profiles:

    * near the axis (s <= 1.5 width), polar around the singular point of
      f, where cos(2 th) P(sqrt(s^2 + rho^2 - 2 s rho cos th)) rho is
      smooth because every profile is a smooth function of s^2 near zero
      or vanishes there; the angular node count grows with s/width, since
      the mollifier occupies a shrinking ~width/s arc in this chart;
    * farther out, polar around the mollifier center, where the angular
      field itself is smooth and uniform nodes converge spectrally.
    """
    width = support if np.isfinite(support) else 9.0
    nodes, weights = np.polynomial.legendre.leggauss(n_rho)
    out = np.empty_like(s_values)
    for i, s in enumerate(s_values):
        if s <= 1.5 * width:
            n_eff = max(n_theta, int(np.ceil(640.0 * s / width)))
            th = (np.arange(n_eff) + 0.5) * (2.0 * np.pi / n_eff)
            lo = max(0.0, s - width)
            hi = s + width
            rho = 0.5 * (hi - lo) * (nodes + 1.0) + lo
            w = 0.5 * (hi - lo) * weights
            arg = np.sqrt(np.maximum(
                s * s + rho[:, None] ** 2
                - 2.0 * s * rho[:, None] * np.cos(th)[None, :], 0.0))
            inner = (profile(arg) * np.cos(2.0 * th)[None, :]).sum(axis=1) \
                * (2.0 * np.pi / n_eff)
            out[i] = np.dot(w, rho * inner)
        else:
            th = (np.arange(n_theta) + 0.5) * (2.0 * np.pi / n_theta)
            sig = 0.5 * width * (nodes + 1.0)
            w = 0.5 * width * weights
            u = s - sig[:, None] * np.cos(th)[None, :]
            v = -sig[:, None] * np.sin(th)[None, :]
            r2 = u * u + v * v
            inner = ((u * u - v * v) / r2).sum(axis=1) * (2.0 * np.pi / n_theta)
            out[i] = np.dot(w, sig * profile(sig) * inner)
    return out


@dataclass
class _ResponseCache:
    spline: interpolate.CubicSpline
    s_max: float
    tail_a2: float   # R ~ 1 + a2/s^2 + a4/s^4 beyond s_max
    tail_a4: float

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.empty_like(s)
        near = s <= self.s_max
        out[near] = self.spline(s[near])
        far = ~near
        if np.any(far):
            sf2 = s[far] ** 2
            out[far] = 1.0 + self.tail_a2 / sf2 + self.tail_a4 / sf2 ** 2
        return out if out.ndim else float(out)


class RegularizedField:
    """Smoothed replacement of the unit double-angle field and its metric.

    Evaluation is exact equivariance times the cached radial response;
    ``eval_direct`` recomputes single points by plain 2D quadrature with
    no angular reduction and serves as the anti-regression oracle.
    """

    def __init__(self, params: ConicalParams, mollifier: MollifierSpec,
                 s_max: float = 12.0, n_s: int = 961,
                 n_rho: int = 200, n_theta: int = 256):
        self.params = params
        self.mollifier = mollifier
        self.s_max = s_max
        self._grid = np.linspace(0.0, s_max, n_s)
        self._quad = (n_rho, n_theta)
        self._caches: dict = {}

    def _cache_key(self, eps: float):
        if self.mollifier.variant is MollifierVariant.STRICT_NET:
            return float(eps)
        return "shared"

    def _response(self, eps: float) -> _ResponseCache:
        key = self._cache_key(eps)
        cache = self._caches.get(key)
        if cache is None:
            prof, supp = self.mollifier.profile_at(eps)
            vals = _radial_response(prof, supp, self._grid, *self._quad)
            spline = interpolate.CubicSpline(self._grid, vals,
                                             bc_type=((1, 0.0), "not-a-knot"))
            a2 = -_radial_second_moment(prof, supp)
            s_fit = self._grid[-8:]
            a4 = float(np.mean((vals[-8:] - 1.0 - a2 / s_fit ** 2) * s_fit ** 4))
            cache = _ResponseCache(spline, self.s_max, a2, a4)
            self._caches[key] = cache
        return cache

    def radial_response(self, eps: float, s):
        """R evaluated at scaled radius s = r/eps (builds the cache on demand)."""
        return self._response(eps)(s)

    def profile_table(self, eps: float):
        """(s, R(s)) samples of the cached response, for CSV export."""
        return self._grid.copy(), self._response(eps)(self._grid)

    def eval(self, eps: float, x, y):
        """(f1_eps, f2_eps) at (x, y); smooth on the whole plane."""
        if eps <= 0.0:
            raise ValueError(f"eps must be positive, got {eps}")
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        scalar = x.ndim == 0 and y.ndim == 0
        x, y = np.broadcast_arrays(np.atleast_1d(x), np.atleast_1d(y))
        r2 = x * x + y * y
        resp = self._response(eps)(np.sqrt(r2) / eps)
        f1 = np.zeros_like(resp)
        f2 = np.zeros_like(resp)
        off = r2 > 0.0
        # e^{2 i theta} written rationally: (x^2 - y^2)/r^2, 2xy/r^2
        f1[off] = resp[off] * (x[off] ** 2 - y[off] ** 2) / r2[off]
        f2[off] = resp[off] * 2.0 * x[off] * y[off] / r2[off]
        if scalar:
            return float(f1[0]), float(f2[0])
        return f1, f2

    def eval_direct(self, eps: float, x: float, y: float,
                    n_sigma: int = 600, n_psi: int = 720):
        """Fallback 2D quadrature of (f1 * phi_eps, f2 * phi_eps)(x, y).

        Mollifier-centered polar grid; makes no use of equivariance or of
        the radial response cache, so it cross-checks both.  Accuracy is
        limited by the kink of f at the shifted origin (~1e-4 worst case).
        """
        prof, supp = self.mollifier.profile_at(eps)
        width = supp if np.isfinite(supp) else 9.0
        nodes, weights = np.polynomial.legendre.leggauss(n_sigma)
        sig = 0.5 * width * (nodes + 1.0)
        w_sig = 0.5 * width * weights
        psi = (np.arange(n_psi) + 0.5) * (2.0 * np.pi / n_psi)
        u = x - eps * sig[:, None] * np.cos(psi)[None, :]
        v = y - eps * sig[:, None] * np.sin(psi)[None, :]
        r2 = u * u + v * v
        bad = r2 < 1e-280
        r2 = np.where(bad, 1.0, r2)
        f1 = np.where(bad, 0.0, (u * u - v * v) / r2)
        f2 = np.where(bad, 0.0, 2.0 * u * v / r2)
        pvals = prof(sig)[:, None]
        dpsi = 2.0 * np.pi / n_psi
        g1 = float(np.dot(w_sig * sig, (pvals * f1).sum(axis=1) * dpsi))
        g2 = float(np.dot(w_sig * sig, (pvals * f2).sum(axis=1) * dpsi))
        return g1, g2

    def mu(self, eps: float, x, y):
        """Smaller eigenvalue of [[f1e, f2e], [f2e, -f1e]]: -(f1e^2 + f2e^2)^0.5."""
        f1, f2 = self.eval(eps, x, y)
        return -np.hypot(f1, f2)

    def spatial_metric(self, eps: float, p_spatial) -> np.ndarray:
        """Smoothed spatial metric rho_eps at one point (x, y, z)."""
        x, y, _ = np.asarray(p_spatial, dtype=float)
        f1, f2 = self.eval(eps, float(x), float(y))
        a2 = self.params.alpha ** 2
        sym = 0.5 * (1.0 + a2)
        dev = 0.5 * (1.0 - a2)
        rho = np.zeros((3, 3))
        rho[0, 0] = sym + dev * f1
        rho[1, 1] = sym - dev * f1
        rho[0, 1] = rho[1, 0] = dev * f2
        rho[2, 2] = 1.0
        return rho

    def metric(self, eps: float, p) -> np.ndarray:
        """Smoothed spacetime metric -dt^2 + rho_eps at p = (t, x, y, z)."""
        _, x, y, z = np.asarray(p, dtype=float)
        g = np.zeros((4, 4))
        g[0, 0] = -1.0
        g[1:, 1:] = self.spatial_metric(eps, (x, y, z))
        return g

    def spatial_quadratic_form(self, eps: float, x, y, v1, v2, v3):
        """rho_eps(v, v); broadcasts over numpy arrays."""
        f1, f2 = self.eval(eps, x, y)
        a2 = self.params.alpha ** 2
        planar = v1 * v1 + v2 * v2
        return (0.5 * (1.0 + a2) * planar
                + 0.5 * (1.0 - a2) * (f1 * (v1 * v1 - v2 * v2) + 2.0 * f2 * v1 * v2)
                + v3 * v3)


@dataclass(frozen=True)
class LowerBoundReport:
    eps: float
    beta: float
    min_margin: float
    argmin_point: tuple
    n_points: int
    n_vectors: int
    min_margin_random_vectors: float


def verify_lower_bound(field: RegularizedField, eps: float,
                       n_points: int = 20000, n_vectors: int = 8,
                       rng: Optional[np.random.Generator] = None,
                       beta_value: Optional[float] = None) -> LowerBoundReport:
    """Sampled check of rho_eps(v, v) >= beta (v1^2 + v2^2) + v3^2.

    Per sampled point the exact worst direction is known (the smaller
    eigenvalue of the planar block, i.e. the angular direction), so the
    reported min margin is a per-point infimum over all v, not only over
    the random vectors, which are kept as a redundant spot check.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    b = beta(field.params, field.mollifier, eps) if beta_value is None else beta_value
    if b is None or b <= 0.0:
        raise ValueError(
            f"(alpha, mollifier) pair inadmissible at eps={eps}: "
            f"alpha^2 <= c_phi")
    # radii spread across the mollifier scale, log-uniform, plus exact axis hits
    log_r = rng.uniform(np.log(1e-3 * eps), np.log(1e3 * eps), n_points)
    r = np.exp(log_r)
    r[: max(1, n_points // 100)] = 0.0
    th = rng.uniform(0.0, 2.0 * np.pi, n_points)
    x, y = r * np.cos(th), r * np.sin(th)
    f1, f2 = field.eval(eps, x, y)
    a2 = field.params.alpha ** 2
    # worst-direction margin: planar block eigenvalue minus beta (z margin is 0)
    planar_min = 0.5 * (1.0 + a2) - 0.5 * (1.0 - a2) * np.hypot(f1, f2)
    margins = planar_min - b
    worst = int(np.argmin(margins))
    min_margin = min(0.0, float(margins[worst]))

    vecs = rng.normal(size=(n_vectors, 3))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    rnd = np.inf
    for v in vecs:
        q = field.spatial_quadratic_form(eps, x, y, v[0], v[1], v[2])
        rnd = min(rnd, float(np.min(q - b * (v[0] ** 2 + v[1] ** 2) - v[2] ** 2)))
    return LowerBoundReport(eps, b, min_margin, (float(x[worst]), float(y[worst])),
                            n_points, n_vectors, rnd)
