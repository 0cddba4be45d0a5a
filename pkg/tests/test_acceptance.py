"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Sizes, tolerances, and runtime caps are fixed here, not configurable; the
CLI exercises the same machinery with manifest-driven (smaller) defaults.
"""

import time

import numpy as np
import pytest

from conewave.causal import CurveFamily, SampledCurve, family_crossing
from conewave.corpus import (oscillation_family, reparametrized_copy,
                             smooth_curve, timelike_curve)
from conewave.curvetop import proportional_reparam, uniform_distance
from conewave.metric import (ConicalParams, angular_components,
                             pullback_residual, sobolev_probe)
from conewave.mollify import (RegularizedField, beta, c_phi,
                              gaussian_mollifier, moment_corrected_mollifier,
                              strict_net_mollifier, strict_net_threshold,
                              verify_lower_bound)
from conewave.wave import (Grid2D, assemble, energy_drift, epsilon_study,
                           gaussian_bump, solve, standing_mode,
                           standing_mode_frequency)
from conewave.causal import curve_causal_profile, CausalClass
from conewave.metric import metric_cartesian

RNG = np.random.default_rng(20240801)


def _report(num, name, passed, detail):
    print(f"\nACCEPTANCE {num} [{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    assert passed, f"criterion {num} ({name}): {detail}"


def _off_axis(n, r_lo=1e-3, r_hi=10.0):
    r = np.exp(RNG.uniform(np.log(r_lo), np.log(r_hi), n))
    th = RNG.uniform(0.0, 2.0 * np.pi, n)
    return r * np.cos(th), r * np.sin(th)


def test_criterion_1_eigenvalue_spectrum():
    t0 = time.perf_counter()
    worst = 0.0
    for alpha in np.arange(0.1, 0.95, 0.1):
        x, y = _off_axis(100_000)
        f1, f2 = angular_components(x, y)
        a2 = alpha * alpha
        sym, dev = 0.5 * (1 + a2), 0.5 * (1 - a2)
        mats = np.zeros((x.size, 4, 4))
        mats[:, 0, 0] = -1.0
        mats[:, 1, 1] = sym + dev * f1
        mats[:, 2, 2] = sym - dev * f1
        mats[:, 1, 2] = mats[:, 2, 1] = dev * f2
        mats[:, 3, 3] = 1.0
        spect = np.sort(np.linalg.eigvalsh(mats), axis=1)
        target = np.sort([-1.0, 1.0, 1.0, a2])
        worst = max(worst, float(np.max(np.abs(spect - target[None, :]))))
    elapsed = time.perf_counter() - t0
    _report(1, "eigenvalue spectrum", worst < 1e-10 and elapsed < 10.0,
            f"max deviation {worst:.3e} (tol 1e-10), runtime {elapsed:.1f}s (cap 10s)")


def test_criterion_2_pullback_identity():
    worst = 0.0
    for _ in range(10_000):
        r = np.exp(RNG.uniform(np.log(1e-2), np.log(10.0)))
        phi = RNG.uniform(-np.pi, np.pi)
        t, z = RNG.normal(size=2)
        alpha = RNG.uniform(0.05, 1.0)
        worst = max(worst, pullback_residual(t, r, phi, z, ConicalParams(alpha)))
    _report(2, "pullback identity", worst < 1e-12,
            f"max residual {worst:.3e} (tol 1e-12)")


def test_criterion_3_spatial_lower_bound():
    alpha = RNG.uniform(0.2, 0.9)
    a2 = alpha * alpha
    x, y = _off_axis(1_000_000)
    f1, f2 = angular_components(x, y)
    v = RNG.standard_normal((x.size, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    planar = v[:, 0] ** 2 + v[:, 1] ** 2
    rho_vv = (0.5 * (1 + a2) * planar
              + 0.5 * (1 - a2) * (f1 * (v[:, 0] ** 2 - v[:, 1] ** 2)
                                  + 2 * f2 * v[:, 0] * v[:, 1])
              + v[:, 2] ** 2)
    margins = rho_vv - a2 * planar - v[:, 2] ** 2
    min_margin = float(np.min(margins))

    # the estimate is tight on angular directions: margin vanishes there
    r = np.hypot(x[:1000], y[:1000])
    va = np.stack([-y[:1000] / r, x[:1000] / r], axis=1)
    rho_ang = (0.5 * (1 + a2)
               + 0.5 * (1 - a2) * (f1[:1000] * (va[:, 0] ** 2 - va[:, 1] ** 2)
                                   + 2 * f2[:1000] * va[:, 0] * va[:, 1]))
    ang_margin = float(np.max(np.abs(rho_ang - a2)))
    ok = min_margin >= -1e-12 and ang_margin < 1e-13
    _report(3, "spatial lower bound", ok,
            f"min margin {min_margin:.3e} (tol -1e-12), "
            f"angular tightness {ang_margin:.1e}")


def test_criterion_4_sobolev_probe():
    t0 = time.perf_counter()
    r_inner = 2.0 ** (-np.arange(3, 13, dtype=float))
    masses = [sobolev_probe(r) for r in r_inner]
    l1 = np.array([m.l1_mass for m in masses])
    l2 = np.array([m.l2_mass for m in masses])
    slopes = np.diff(l2) / np.diff(np.log(1.0 / r_inner))
    tail = slopes[-4:]
    spread = float((tail.max() - tail.min()) / abs(tail.mean()))
    incr = np.diff(l1)
    ratios = incr[:-1] / incr[1:]
    elapsed = time.perf_counter() - t0
    ok = (np.all(slopes > 0.0) and spread < 0.05
          and np.all(ratios >= 1.5) and elapsed < 30.0)
    _report(4, "integrability probe", ok,
            f"slope {tail.mean():.4f} spread {spread:.2e} (tol 5%), "
            f"l1 decay min ratio {ratios.min():.2f} (tol 1.5), "
            f"runtime {elapsed:.1f}s (cap 30s)")


def test_criterion_5_regularized_bound():
    # Variant A at alpha = 0.5 across three smoothing scales
    field_a = RegularizedField(ConicalParams(0.5), gaussian_mollifier())
    margins = {}
    for eps in (1.0, 0.1, 0.01):
        rep = verify_lower_bound(field_a, eps, n_points=100_000, rng=RNG)
        assert rep.beta == pytest.approx(0.25)
        margins[eps] = rep.min_margin
    ok_a = all(m >= -1e-10 for m in margins.values())

    # Variant B: admissibility decided exactly by alpha^2 vs c_phi
    spec_b = moment_corrected_mollifier()
    cb = c_phi(spec_b)
    decisions = []
    for alpha in np.linspace(0.05, 1.0, 39):
        decided = beta(ConicalParams(alpha), spec_b) is not None
        decisions.append(decided == (alpha ** 2 > cb))
    ok_b = all(decisions)

    # Variant C: threshold below which the bound is nonnegative
    params_c = ConicalParams(0.2)
    spec_c = strict_net_mollifier()
    thr = strict_net_threshold(params_c, spec_c)
    field_c = RegularizedField(params_c, spec_c)
    below = [thr * f for f in (0.9, 0.5, 0.2)]
    ok_c = (abs(thr - 2 * 0.04 / 0.96) < 1e-6
            and beta(params_c, spec_c, thr * 1.1) is None
            and all(verify_lower_bound(field_c, e, n_points=20_000,
                                       rng=RNG).min_margin >= -1e-10
                    for e in below))
    _report(5, "regularized lower bound", ok_a and ok_b and ok_c,
            f"variant A margins {[f'{m:.1e}' for m in margins.values()]} "
            f"(tol -1e-10, beta=0.25); variant B decision exact; "
            f"variant C threshold {thr:.6f}")


def test_criterion_6a_flat_convergence():
    t0 = time.perf_counter()
    field = RegularizedField(ConicalParams(1.0), gaussian_mollifier())
    errors = []
    for n in (64, 128, 256, 512):
        grid = Grid2D(n, 1.0)
        op = assemble(field, 0.5, grid)
        u0, v0 = standing_mode(grid, 1, 1)
        om = standing_mode_frequency(grid, 1, 1)
        st = solve(op, u0, v0, 0.5, record_energy=False)
        errors.append(float(grid.h * np.linalg.norm(st.u - u0 * np.cos(om * 0.5))))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    elapsed = time.perf_counter() - t0
    ok = np.all(orders >= 1.9) and elapsed < 120.0
    _report("6a", "flat-space grid convergence", ok,
            f"orders {[f'{o:.3f}' for o in orders]} (tol 1.9), "
            f"runtime {elapsed:.1f}s (cap 120s)")


def test_criterion_6b_conical_energy_drift():
    field = RegularizedField(ConicalParams(0.5), gaussian_mollifier())
    grid = Grid2D(128, 1.0)
    op = assemble(field, 0.1, grid)
    u0, v0 = gaussian_bump(grid, center=(0.25, 0.0), width=0.15)
    st = solve(op, u0, v0, 0.2, c_cfl=0.1)
    drift = energy_drift(st)
    edge = float(max(np.max(np.abs(st.u[0, :])), np.max(np.abs(st.u[-1, :])),
                     np.max(np.abs(st.u[:, 0])), np.max(np.abs(st.u[:, -1]))))
    _report("6b", "conical energy drift", drift < 1e-4,
            f"drift {drift:.3e} (tol 1e-4), boundary magnitude {edge:.1e}")


def test_criterion_6c_epsilon_study():
    field = RegularizedField(ConicalParams(0.5), gaussian_mollifier())
    grid = Grid2D(512, 8.0)
    u0, v0 = gaussian_bump(grid, center=(3.0, 0.0), width=0.8)
    eps_list = [2.0 ** (-k) for k in range(6)]
    study = epsilon_study(field, eps_list, grid, (u0, v0), t_final=4.5)
    _report("6c", "epsilon-net Cauchy behavior", study.monotone,
            "distances " + " > ".join(f"{d:.3e}" for d in study.distances))


def _line_family(eps_list, x_of_eps, tilt=0.0, span=2.0, n=161):
    s = np.linspace(-span, span, n)
    c = np.sqrt(1.0 - tilt * tilt)
    members = {}
    for eps in eps_list:
        x0 = x_of_eps(eps)
        pts = np.stack([c * s, x0 + tilt * s, np.zeros_like(s),
                        np.zeros_like(s)], axis=1)
        vel = np.tile([c, tilt, 0.0, 0.0], (n, 1))
        members[eps] = SampledCurve(s, pts, vel)
    return CurveFamily(members)


def test_criterion_7_crossing_proposition():
    field = RegularizedField(ConicalParams(0.5), gaussian_mollifier())
    eps_list = [2.0 ** (-k) for k in range(8)]

    fam_i = _line_family(eps_list, lambda e: np.sin(1.0 / e))
    rep_i = family_crossing(fam_i, field)
    s_exact = all(v == 0.0 for v in rep_i.crossing_params.values())
    pts = np.array([rep_i.crossing_points[e] for e in eps_list])
    in_band = (np.all(np.abs(pts[:, 1]) <= 1.0 + 1e-9)
               and np.all(np.abs(pts[:, 2:]) <= 1e-9))

    fam_ii = _line_family(eps_list, lambda e: 1.0 / e)
    rep_ii = family_crossing(fam_ii, field)

    # admissible corpora: static, oscillating-offset, and boosted families
    starstar_ok = (rep_i.starstar_min_slack >= -1e-12
                   and rep_ii.starstar_min_slack >= -1e-12)
    boosted = _line_family([0.25, 0.125, 0.0625], lambda e: np.sin(1.0 / e),
                           tilt=0.6)
    rep_b = family_crossing(boosted, field, q_exponent=1.0)
    starstar_ok = starstar_ok and rep_b.starstar_min_slack >= -1e-12
    star_ok = (rep_i.star_min_slack >= -1e-12
               and rep_b.star_min_slack >= -1e-12)

    ok = (s_exact and in_band and rep_i.c_bounded and not rep_ii.c_bounded
          and starstar_ok and star_ok)
    _report(7, "crossing proposition", ok,
            f"s_eps all zero: {s_exact}; accumulation in band: {in_band}; "
            f"example (ii) c-bound flag: {not rep_ii.c_bounded}; "
            f"(**) min slack {min(rep_i.starstar_min_slack, rep_b.starstar_min_slack):.3f}")


def test_criterion_8_curve_topology():
    rng = np.random.default_rng(7)
    worst_idem = worst_canon = 0.0
    for _ in range(50):
        c = smooth_curve(rng)
        canon = proportional_reparam(c)
        again = proportional_reparam(canon)
        worst_idem = max(worst_idem, uniform_distance(canon, again))
        other = proportional_reparam(reparametrized_copy(c, rng))
        worst_canon = max(worst_canon, uniform_distance(canon, other))
    reparam_ok = worst_idem <= 1e-8 and worst_canon <= 1e-8

    fam = oscillation_family([2 ** k for k in range(11)])   # up to n = 1024
    from conewave.curvetop import arzela_ascoli_extract
    box = (np.array([-0.1, -0.1, -1.1, -0.1]), np.array([1.1, 1.1, 1.1, 0.1]))
    res = arzela_ascoli_extract(fam, box)
    seg = fam[0].points.copy()
    seg[:, 2] = 0.0
    aa_err = float(np.max(np.linalg.norm(res.limit.points - seg, axis=1)))

    params = ConicalParams(0.5)
    curves = [timelike_curve(rng) for _ in range(16)]
    limit = SampledCurve(curves[0].s,
                         np.mean([c.points for c in curves], axis=0),
                         np.mean([c.velocities for c in curves], axis=0))
    prof = curve_causal_profile(limit, lambda p: metric_cartesian(p, params))
    causal_ok = prof.causal_class in (CausalClass.TIMELIKE, CausalClass.NULL)

    ok = reparam_ok and aa_err < 1e-3 and causal_ok
    _report(8, "curve topology", ok,
            f"idempotence {worst_idem:.2e}, canonicality {worst_canon:.2e} "
            f"(tol 1e-8); oscillation-family limit error {aa_err:.2e} "
            f"(tol 1e-3); causal limit: {prof.causal_class.value}")
