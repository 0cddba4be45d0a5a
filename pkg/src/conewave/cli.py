"""Manifest-driven experiment runner.

Four subcommands (verify-metric, regularize, wave, curves), each taking
``--manifest <path> --out <dir> [--seed <int>]``.  Every run writes a JSON
report with one entry per check, the delimited artifacts of the module it
drives, and PNG renderings of the main quantities.  Exit status: 0 when
every asserted check passed, 1 when any failed, 2 on a bad manifest.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import figures
from .causal import (CurveFamily, SampledCurve, cauchy_crossing,
                     curve_causal_profile, family_crossing,
                     unit_speed_reparam)
from .corpus import (oscillation_family, reparametrized_copy, smooth_curve,
                     timelike_curve)
from .curvetop import (arzela_ascoli_extract, to_image_class,
                       proportional_reparam, uniform_distance)
from .ioutil import (Manifest, ManifestError, save_energy_csv, save_family,
                     save_mollifier_config, save_profile_csv,
                     save_snapshot_csv, save_snapshot_raw, write_json_report)
from .metric import (ConicalParams, QuadratureSpec, angular_components,
                     metric_cartesian, pullback_residual, sobolev_probe,
                     spatial_quadratic_form, split_metric)
from .mollify import (MOLLIFIER_FACTORIES, MollifierVariant, RegularizedField,
                      beta, beta_conservative, c_phi, profile_mass,
                      strict_net_threshold, verify_lower_bound)
from .wave import (Grid2D, assemble, energy_drift, epsilon_study,
                   gaussian_bump, solve, standing_mode,
                   standing_mode_frequency, DATA_FACTORIES)


def _check(checks: list, name: str, passed: bool, **details):
    entry = {"name": name, "passed": bool(passed), **details}
    checks.append(entry)
    print(f"[{'PASS' if passed else 'FAIL'}] {name}: "
          + ", ".join(f"{k}={v}" for k, v in details.items()))
    return passed


def _mollifier_from(manifest: Manifest, default: str = "gaussian"):
    label = manifest.get_str("mollifier", default)
    if label not in MOLLIFIER_FACTORIES:
        raise ManifestError(
            f"unknown mollifier {label!r}; choices: {sorted(MOLLIFIER_FACTORIES)}")
    return MOLLIFIER_FACTORIES[label]()


# ---------------------------------------------------------------------------
# verify-metric


def cmd_verify_metric(manifest: Manifest, out: Path, seed: int) -> dict:
    alpha = manifest.get_alpha()
    params = ConicalParams(alpha)
    rng = np.random.default_rng(seed)
    n_eigen = manifest.get_int("n_eigen", 20000)
    n_margin = manifest.get_int("n_margin", 200000)
    n_pullback = manifest.get_int("n_pullback", 10000)
    k_min = manifest.get_int("sobolev_k_min", 3)
    k_max = manifest.get_int("sobolev_k_max", 12)
    checks: list = []

    def sample_offaxis(n, r_lo=1e-3, r_hi=10.0):
        r = np.exp(rng.uniform(np.log(r_lo), np.log(r_hi), n))
        th = rng.uniform(0.0, 2.0 * np.pi, n)
        return r * np.cos(th), r * np.sin(th)

    x, y = sample_offaxis(n_eigen)
    f1, f2 = angular_components(x, y)
    unit_res = float(np.max(np.abs(f1 * f1 + f2 * f2 - 1.0)))
    _check(checks, "unit_field", unit_res < 1e-14, residual=unit_res,
           tolerance=1e-14)

    a2 = alpha * alpha
    sym, dev = 0.5 * (1.0 + a2), 0.5 * (1.0 - a2)
    mats = np.zeros((n_eigen, 4, 4))
    mats[:, 0, 0] = -1.0
    mats[:, 1, 1] = sym + dev * f1
    mats[:, 2, 2] = sym - dev * f1
    mats[:, 1, 2] = mats[:, 2, 1] = dev * f2
    mats[:, 3, 3] = 1.0
    spect = np.sort(np.linalg.eigvalsh(mats), axis=1)
    target = np.sort([-1.0, 1.0, 1.0, a2])
    eig_dev = float(np.max(np.abs(spect - target[None, :])))
    _check(checks, "eigen_spectrum", eig_dev < 1e-10, deviation=eig_dev,
           tolerance=1e-10)

    det2 = (sym + dev * f1) * (sym - dev * f1) - (dev * f2) ** 2
    det_dev = float(np.max(np.abs(det2 - a2)))
    _check(checks, "planar_determinant", det_dev < 1e-12, deviation=det_dev,
           tolerance=1e-12)

    res = 0.0
    for _ in range(n_pullback):
        r = np.exp(rng.uniform(np.log(1e-2), np.log(10.0)))
        phi = rng.uniform(-np.pi, np.pi)
        t, z = rng.normal(size=2)
        res = max(res, pullback_residual(t, r, phi, z, params))
    _check(checks, "pullback_identity", res < 1e-12, residual=res,
           tolerance=1e-12)

    xs, ys = sample_offaxis(200)
    reasm = 0.0
    for xi, yi in zip(xs, ys):
        p = (0.0, xi, yi, 0.0)
        eta, hdef = split_metric(p, params)
        reasm = max(reasm, float(np.max(np.abs(
            eta + dev * hdef - metric_cartesian(p, params)))))
    _check(checks, "split_reassembly", reasm < 1e-14, residual=reasm,
           tolerance=1e-14)

    xm, ym = sample_offaxis(n_margin)
    v = rng.standard_normal((n_margin, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    q = spatial_quadratic_form(xm, ym, v[:, 0], v[:, 1], v[:, 2], params)
    margins = q - (a2 * (v[:, 0] ** 2 + v[:, 1] ** 2) + v[:, 2] ** 2)
    min_margin = float(np.min(margins))
    _check(checks, "spatial_lower_bound", min_margin >= -1e-12,
           min_margin=min_margin, tolerance=-1e-12)

    ks = np.arange(k_min, k_max + 1)
    r_inner = 2.0 ** (-ks.astype(float))
    masses = [sobolev_probe(r, QuadratureSpec()) for r in r_inner]
    l1 = np.array([m.l1_mass for m in masses])
    l2 = np.array([m.l2_mass for m in masses])
    slopes = np.diff(l2) / np.diff(np.log(1.0 / r_inner))
    tail = slopes[-4:]
    slope_spread = float((tail.max() - tail.min()) / abs(np.mean(tail)))
    _check(checks, "sobolev_quadratic_log_slope",
           bool(np.all(slopes > 0.0)) and slope_spread < 0.05,
           mean_slope=float(np.mean(tail)), spread=slope_spread,
           tolerance=0.05)
    incr = np.diff(l1)
    ratios = incr[:-1] / incr[1:]
    _check(checks, "sobolev_l1_increment_decay",
           bool(np.all(ratios >= 1.5)), min_ratio=float(np.min(ratios)),
           tolerance=1.5)

    np.savetxt(out / "sobolev_masses.csv",
               np.column_stack([r_inner, l1, l2]), delimiter=",",
               header="r_inner,l1_mass,l2_mass", comments="")
    figures.fig_sobolev(out / "sobolev_masses.png", r_inner, l1, l2,
                        float(np.mean(tail)))
    figures.fig_margin_hist(out / "margins.png", margins,
                            title=f"exact-metric margins, alpha={alpha}")
    return {
        "command": "verify-metric", "seed": seed,
        "params": {"alpha": alpha, "n_eigen": n_eigen, "n_margin": n_margin,
                   "n_pullback": n_pullback},
        "checks": checks,
    }


# ---------------------------------------------------------------------------
# regularize


def cmd_regularize(manifest: Manifest, out: Path, seed: int) -> dict:
    alpha = manifest.get_alpha()
    params = ConicalParams(alpha)
    spec = _mollifier_from(manifest)
    eps_list = manifest.get_eps_list(default=[1.0, 0.1, 0.01])
    n_samples = manifest.get_int("n_samples", 20000)
    rng = np.random.default_rng(seed)
    checks: list = []
    field = RegularizedField(params, spec)

    eps0 = eps_list[0] if spec.variant is MollifierVariant.STRICT_NET else None
    prof, supp = spec.profile_at(eps0)
    mass = profile_mass(spec, eps0)
    _check(checks, "profile_normalization", abs(mass - 1.0) < 1e-10,
           integral=mass, tolerance=1e-10)

    s_tab = np.linspace(0.0, supp if np.isfinite(supp) else 6.0, 301)
    save_profile_csv(out / "profile.csv", s_tab, prof(s_tab))
    figures.fig_profile(out / "profile.png", s_tab, prof(s_tab),
                        label=f"P(s), {spec.label}")
    save_mollifier_config(out / "mollifier.cfg", spec, eps0)

    entries = []
    response_tables = []
    margin_rows = []
    for eps in eps_list:
        cv = c_phi(spec, eps)
        bv = beta(params, spec, eps)
        bc = beta_conservative(params, spec, eps)
        entry = {"eps": eps, "l1_norm": spec.l1_at(eps), "c_phi": cv,
                 "beta": bv, "beta_conservative": bc,
                 "admissible": bv is not None}
        decision_consistent = (bv is not None) == (alpha ** 2 > cv)
        _check(checks, f"admissibility_decision_eps_{eps:g}",
               decision_consistent, admissible=bv is not None, c_phi=cv,
               alpha_sq=alpha ** 2)
        if bv is not None:
            rep = verify_lower_bound(field, eps, n_points=n_samples, rng=rng)
            entry["min_margin"] = rep.min_margin
            margin_rows.append((eps, rep.min_margin))
            _check(checks, f"lower_bound_margin_eps_{eps:g}",
                   rep.min_margin >= -1e-10, min_margin=rep.min_margin,
                   beta=bv, tolerance=-1e-10)
        s, r = field.profile_table(eps)
        save_profile_csv(out / f"response_eps_{eps:g}.csv", s, r,
                         value_name="R")
        response_tables.append((eps, s, r))
        entries.append(entry)

    report = {
        "command": "regularize", "seed": seed,
        "params": {"alpha": alpha, "mollifier": spec.label,
                   "variant": spec.variant.value, "eps_list": eps_list,
                   "n_samples": n_samples},
        "admissibility": entries,
        "checks": checks,
    }
    if spec.variant is MollifierVariant.STRICT_NET:
        thr = strict_net_threshold(params, spec)
        report["eps_threshold"] = thr
        below = [e for e in eps_list if e < thr]
        _check(checks, "strict_net_threshold",
               len(below) > 0 and all(beta(params, spec, e) is not None
                                      for e in below),
               threshold=thr, admissible_below=len(below))
    figures.fig_responses(out / "responses.png", response_tables)
    if margin_rows:
        arr = np.array(margin_rows)
        figures.fig_margins_vs_eps(out / "margins_vs_eps.png",
                                   arr[:, 0], arr[:, 1])
    write_json_report(out / "admissibility.json", report["admissibility"])
    return report


# ---------------------------------------------------------------------------
# wave


def _wave_data(manifest: Manifest, grid: Grid2D):
    kind = manifest.get_str("data", "gaussian")
    if kind not in DATA_FACTORIES:
        raise ManifestError(f"unknown data kind {kind!r}")
    if kind == "standing":
        return standing_mode(grid, manifest.get_int("mode_m", 1),
                             manifest.get_int("mode_n", 1))
    center = (manifest.get_float("data_center_x", 0.25),
              manifest.get_float("data_center_y", 0.0))
    width = manifest.get_float("data_width", 0.15)
    return DATA_FACTORIES[kind](grid, center=center, width=width)


def cmd_wave(manifest: Manifest, out: Path, seed: int) -> dict:
    task = manifest.get_str("task")
    alpha = manifest.get_alpha()
    params = ConicalParams(alpha)
    spec = _mollifier_from(manifest)
    field = RegularizedField(params, spec)
    checks: list = []
    recorded: dict = {}

    if task == "convergence":
        grid_list = [int(v) for v in manifest.get_floats("grid_list",
                                                         [64, 128, 256, 512])]
        extent = manifest.get_float("box_extent", 1.0)
        eps = manifest.get_float("eps", 0.5)
        t_final = manifest.get_float("t_final", 0.5)
        m = manifest.get_int("mode_m", 1)
        n_mode = manifest.get_int("mode_n", 1)
        errors = []
        for n in grid_list:
            grid = Grid2D(n, extent, cfl=manifest.get_float("c_cfl", 0.5))
            op = assemble(field, eps, grid)
            u0, v0 = standing_mode(grid, m, n_mode)
            om = standing_mode_frequency(grid, m, n_mode)
            st = solve(op, u0, v0, t_final, record_energy=False)
            errors.append(float(grid.h * np.linalg.norm(
                st.u - u0 * np.cos(om * t_final))))
        orders = [float(np.log2(a / b)) for a, b in zip(errors[:-1], errors[1:])]
        _check(checks, "grid_convergence_order",
               min(orders) >= manifest.get_float("order_tol", 1.9),
               orders=[round(o, 3) for o in orders],
               tolerance=manifest.get_float("order_tol", 1.9))
        hs = [2.0 * extent / n for n in grid_list]
        np.savetxt(out / "convergence.csv", np.column_stack([grid_list, hs, errors]),
                   delimiter=",", header="n,h,l2_error", comments="")
        figures.fig_convergence(out / "convergence.png", hs, errors)
        recorded["errors"] = errors
        recorded["orders"] = orders

    elif task == "drift":
        n = manifest.get_int("grid_n", 128)
        extent = manifest.get_float("box_extent", 1.0)
        eps = manifest.get_float("eps", 0.1)
        grid = Grid2D(n, extent)
        op = assemble(field, eps, grid)
        u0, v0 = _wave_data(manifest, grid)
        t_final = manifest.get_float("t_final", 0.2)
        c_cfl = manifest.get_float("c_cfl", 0.1)
        dt = manifest.get_float("dt", 0.0) or None
        st = solve(op, u0, v0, t_final, dt=dt, c_cfl=c_cfl)
        drift = energy_drift(st)
        tol = manifest.get_float("drift_tol", 1e-4)
        _check(checks, "energy_drift", drift < tol, drift=drift, tolerance=tol)
        edge = float(max(np.max(np.abs(st.u[0, :])), np.max(np.abs(st.u[-1, :])),
                         np.max(np.abs(st.u[:, 0])), np.max(np.abs(st.u[:, -1]))))
        recorded["boundary_magnitude"] = edge
        recorded["n_energy_samples"] = len(st.energy_trace)
        save_energy_csv(out / "energy_trace.csv", st.energy_trace)
        save_snapshot_raw(out / "snapshot_final", st.u, extent, st.t)
        save_snapshot_csv(out / "snapshot_final.csv", st.u)
        figures.fig_energy_trace(out / "energy_trace.png", st.energy_trace)
        figures.fig_snapshot(out / "snapshot_final.png", st.u, extent, st.t)

    elif task == "epsilon-study":
        n = manifest.get_int("grid_n", 512)
        extent = manifest.get_float("box_extent", 8.0)
        grid = Grid2D(n, extent)
        eps_list = manifest.get_eps_list(default=[2.0 ** (-k) for k in range(6)])
        center = (manifest.get_float("data_center_x", 3.0),
                  manifest.get_float("data_center_y", 0.0))
        width = manifest.get_float("data_width", 0.8)
        u0, v0 = gaussian_bump(grid, center=center, width=width)
        t_final = manifest.get_float("t_final", 4.5)
        study = epsilon_study(field, eps_list, grid, (u0, v0), t_final)
        _check(checks, "epsilon_distances_decreasing", study.monotone,
               distances=[f"{d:.4e}" for d in study.distances])
        np.savetxt(out / "epsilon_distances.csv",
                   np.column_stack([study.eps_values[:-1], study.eps_values[1:],
                                    study.distances]),
                   delimiter=",", header="eps_hi,eps_lo,l2_distance", comments="")
        figures.fig_distances(out / "epsilon_distances.png",
                              list(study.eps_values), list(study.distances))
        write_json_report(out / "epsilon_study.json", {
            "eps_values": list(study.eps_values),
            "distances": list(study.distances),
            "t_final": study.t_final, "grid_n": study.grid_n,
            "monotone": study.monotone})
        recorded["distances"] = list(study.distances)
    else:
        raise ManifestError(f"unknown wave task {task!r}")

    return {"command": "wave", "seed": seed,
            "params": {"task": task, "alpha": alpha, "mollifier": spec.label},
            "recorded": recorded, "checks": checks}


# ---------------------------------------------------------------------------
# curves


def _example_family(kind: str, eps_list, s_span: float, n_nodes: int
                    ) -> CurveFamily:
    s = np.linspace(-s_span, s_span, n_nodes)
    members = {}
    for eps in eps_list:
        if kind == "i":
            x0 = np.sin(1.0 / eps)
        else:
            x0 = 1.0 / eps
        pts = np.zeros((n_nodes, 4))
        pts[:, 0] = s
        pts[:, 1] = x0
        vel = np.zeros((n_nodes, 4))
        vel[:, 0] = 1.0
        members[eps] = SampledCurve(s, pts, vel)
    return CurveFamily(members)


def cmd_curves(manifest: Manifest, out: Path, seed: int) -> dict:
    task = manifest.get_str("task", "all")
    alpha = manifest.get_alpha()
    params = ConicalParams(alpha)
    spec = _mollifier_from(manifest)
    field = RegularizedField(params, spec)
    rng = np.random.default_rng(seed)
    checks: list = []
    recorded: dict = {}

    if task in ("examples", "all"):
        eps_list = manifest.get_eps_list(default=[2.0 ** (-k) for k in range(7)])
        s_span = manifest.get_float("s_span", 2.0)
        n_nodes = manifest.get_int("n_nodes", 161)
        q_exp = manifest.get_float("q_exponent", 0.0)

        fam_i = _example_family("i", eps_list, s_span, n_nodes)
        save_family(out / "example_i_family", fam_i)
        rep_i = family_crossing(fam_i, field, q_exponent=q_exp)
        s_eps = np.array([rep_i.crossing_params[e] for e in eps_list])
        pts = np.array([rep_i.crossing_points[e] for e in eps_list])
        _check(checks, "example_i_crossing_at_zero",
               bool(np.all(np.abs(s_eps) <= 1e-12)),
               max_abs_s=float(np.max(np.abs(s_eps))))
        in_band = (np.all(np.abs(pts[:, 1]) <= 1.0 + 1e-9)
                   and np.all(np.abs(pts[:, 2:]) <= 1e-9))
        _check(checks, "example_i_accumulation_band", bool(in_band),
               max_x=float(np.max(np.abs(pts[:, 1]))))
        _check(checks, "example_i_c_bounded", rep_i.c_bounded)
        _check(checks, "example_i_bounds",
               rep_i.star_min_slack >= -1e-9
               and rep_i.starstar_min_slack >= -1e-9
               and rep_i.c_bound_max_violation <= 1e-9,
               star=rep_i.star_min_slack, starstar=rep_i.starstar_min_slack,
               c_bound=rep_i.c_bound_max_violation)
        write_json_report(out / "example_i.json", {
            "eps": list(eps_list), "s_eps": s_eps, "points": pts,
            "beta": rep_i.beta, "c_bounded": rep_i.c_bounded,
            "bounding_box": rep_i.spatial_bounding_box})
        figures.fig_crossings(out / "example_i_crossings.png", eps_list,
                              pts[:, 1])

        fam_ii = _example_family("ii", eps_list, s_span, n_nodes)
        rep_ii = family_crossing(fam_ii, field, q_exponent=q_exp)
        _check(checks, "example_ii_not_c_bounded", not rep_ii.c_bounded,
               radii=list(fam_ii.image_radii().values()))
        _check(checks, "example_ii_crossings_exist",
               len(rep_ii.crossing_params) == len(eps_list))
        write_json_report(out / "example_ii.json", {
            "eps": list(eps_list),
            "s_eps": [rep_ii.crossing_params[e] for e in eps_list],
            "c_bounded": rep_ii.c_bounded})

    if task in ("corpus", "all"):
        size = manifest.get_int("corpus_size", 50)
        n_nodes = manifest.get_int("corpus_nodes", 1024)
        worst_idem = 0.0
        worst_canon = 0.0
        worst_speed_ratio = 1.0
        classes = []
        for _ in range(size):
            c = smooth_curve(rng, n_nodes=n_nodes)
            canon = proportional_reparam(c)
            again = proportional_reparam(canon)
            worst_idem = max(worst_idem, uniform_distance(canon, again))
            other = proportional_reparam(reparametrized_copy(c, rng))
            worst_canon = max(worst_canon, uniform_distance(canon, other))
            sp = canon.node_speeds()
            worst_speed_ratio = max(worst_speed_ratio, float(sp.max() / sp.min()))
            classes.append(to_image_class(canon))
        _check(checks, "reparam_idempotence", worst_idem <= 1e-8,
               worst=worst_idem, tolerance=1e-8)
        _check(checks, "reparam_canonicality", worst_canon <= 1e-8,
               worst=worst_canon, tolerance=1e-8)
        _check(checks, "speed_constancy", worst_speed_ratio <= 1.0 + 1e-6,
               worst_ratio=worst_speed_ratio)
        write_json_report(out / "class_reports.json", [
            {"length": cls.length,
             "endpoints": [cls.endpoints[0], cls.endpoints[1]],
             "canonical_nodes": cls.image[:: max(1, len(cls.image) // 32)]}
            for cls in classes[:10]])

        n_values = [2 ** k for k in range(11)]
        fam = oscillation_family(n_values)
        box = (np.array([-0.1, -0.1, -1.1, -0.1]),
               np.array([1.1, 1.1, 1.1, 0.1]))
        res = arzela_ascoli_extract(fam, box)
        seg = fam[0].points.copy()
        seg[:, 2] = 0.0
        limit_err = float(np.max(np.linalg.norm(res.limit.points - seg, axis=1)))
        _check(checks, "arzela_ascoli_limit", limit_err < 1e-3,
               limit_error=limit_err, selected=list(res.indices),
               tolerance=1e-3)
        figures.fig_corpus(out / "oscillation_family.png", fam, res.limit)

        # timelike corpus: unique slice crossing and unit-speed normal form
        tl = [timelike_curve(rng) for _ in range(8)]
        crossing_counts = []
        worst_speed_dev = 0.0
        for c in tl:
            prof = curve_causal_profile(c, lambda p: metric_cartesian(p, params))
            for t0 in (-0.8, 0.0, 0.9):
                rep = cauchy_crossing(c, t0, params, profile=prof)
                crossing_counts.append(len(rep.roots))
            unit = unit_speed_reparam(c)
            speeds = np.linalg.norm(unit.velocities, axis=1)
            worst_speed_dev = max(worst_speed_dev,
                                  float(np.max(np.abs(speeds - 1.0))))
        _check(checks, "corpus_unique_crossings",
               all(n == 1 for n in crossing_counts),
               counts=sorted(set(crossing_counts)))
        _check(checks, "corpus_unit_speed_reparam", worst_speed_dev <= 1e-8,
               worst_deviation=worst_speed_dev, tolerance=1e-8)

        # limits of timelike corpora stay causal for the discrete classifier
        mean_pts = np.mean([c.points for c in tl], axis=0)
        mean_vel = np.mean([c.velocities for c in tl], axis=0)
        limit_curve = SampledCurve(tl[0].s, mean_pts, mean_vel)
        prof = curve_causal_profile(
            limit_curve, lambda p: metric_cartesian(p, params))
        vals = prof.values[~np.isnan(prof.values)]
        _check(checks, "limit_causality", bool(np.all(vals <= 1e-9)),
               max_value=float(np.max(vals)))
        recorded["corpus_size"] = size

    if task not in ("examples", "corpus", "all"):
        raise ManifestError(f"unknown curves task {task!r}")

    return {"command": "curves", "seed": seed,
            "params": {"task": task, "alpha": alpha, "mollifier": spec.label},
            "recorded": recorded, "checks": checks}


# ---------------------------------------------------------------------------


COMMANDS = {
    "verify-metric": cmd_verify_metric,
    "regularize": cmd_regularize,
    "wave": cmd_wave,
    "curves": cmd_curves,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="conewave",
        description="Conical-spacetime numerics: verification runs and reports.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--manifest", required=True, type=Path)
        p.add_argument("--out", required=True, type=Path)
        p.add_argument("--seed", type=int, default=None)
    args = parser.parse_args(argv)

    try:
        manifest = Manifest.load(args.manifest)
        seed = args.seed if args.seed is not None else manifest.get_int("seed", 0)
        out = args.out
        out.mkdir(parents=True, exist_ok=True)
        report = COMMANDS[args.command](manifest, out, seed)
    except (ManifestError, FileNotFoundError) as exc:
        print(f"manifest error: {exc}", file=sys.stderr)
        return 2
    report["all_pass"] = all(c["passed"] for c in report["checks"])
    write_json_report(out / "report.json", report)
    print(f"report: {out / 'report.json'}")
    return 0 if report["all_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
