import json

import numpy as np
import pytest

from conewave.causal import CurveFamily
from conewave.cli import main
from conewave.corpus import timelike_curve
from conewave.ioutil import (Manifest, ManifestError, load_curve_csv,
                             load_family, load_mollifier_config,
                             load_snapshot_raw, read_manifest, save_curve_csv,
                             save_energy_csv, save_family,
                             save_mollifier_config, save_profile_csv,
                             save_snapshot_raw, write_manifest)
from conewave.mollify import moment_corrected_mollifier


def test_manifest_round_trip(tmp_path):
    path = tmp_path / "run.cfg"
    write_manifest(path, {"alpha": "0.5", "eps_list": "1, 0.5, 0.25"})
    m = Manifest.load(path)
    assert m.get_alpha() == 0.5
    assert m.get_eps_list() == [1.0, 0.5, 0.25]
    assert m.get_int("missing", 7) == 7
    assert m.get_str("missing", "x") == "x"


def test_manifest_validation(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("alpha 0.5\n")
    with pytest.raises(ManifestError):
        read_manifest(path)
    write_manifest(path, {"alpha": "1.5"})
    with pytest.raises(ManifestError):
        Manifest.load(path).get_alpha()
    write_manifest(path, {"alpha": "0.5", "eps_list": "0.25, 0.5"})
    with pytest.raises(ManifestError):
        Manifest.load(path).get_eps_list()
    write_manifest(path, {"alpha": "0.5", "eps_list": "0.5, -0.25"})
    with pytest.raises(ManifestError):
        Manifest.load(path).get_eps_list()
    write_manifest(path, {"curve": "nowhere.csv"})
    with pytest.raises(ManifestError):
        Manifest.load(path).get_path("curve")


def test_manifest_comments_and_ordering(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("# a comment\n\nalpha = 0.3\n  # indented comment\nn = 4\n")
    m = read_manifest(path)
    assert m == {"alpha": "0.3", "n": "4"}


def test_curve_csv_round_trip(tmp_path, rng):
    c = timelike_curve(rng, n_nodes=41)
    p = tmp_path / "curve.csv"
    save_curve_csv(p, c)
    back = load_curve_csv(p)
    np.testing.assert_allclose(back.points, c.points, atol=1e-12)
    np.testing.assert_allclose(back.velocities, c.velocities, atol=1e-12)

    save_curve_csv(p, c, with_derivatives=False)
    back2 = load_curve_csv(p)
    np.testing.assert_allclose(back2.points, c.points, atol=1e-12)
    # derivatives re-fitted from a spline: close but not identical
    assert np.max(np.abs(back2.velocities - c.velocities)) < 1e-3


def test_family_round_trip(tmp_path, rng):
    members = {e: timelike_curve(rng, n_nodes=31) for e in (0.5, 0.25, 0.125)}
    fam = CurveFamily(members)
    manifest_path = save_family(tmp_path / "fam", fam)
    back = load_family(manifest_path)
    assert back.eps_values == [0.5, 0.25, 0.125]
    for e in members:
        np.testing.assert_allclose(back.members[e].points, members[e].points,
                                   atol=1e-12)


def test_mollifier_config_round_trip(tmp_path):
    spec = moment_corrected_mollifier()
    p = tmp_path / "moll.cfg"
    save_mollifier_config(p, spec)
    back = load_mollifier_config(p)
    assert back.label == spec.label
    assert back.variant is spec.variant
    assert back.l1_norm == pytest.approx(spec.l1_norm)


def test_snapshot_round_trip(tmp_path):
    u = np.arange(12.0).reshape(4, 3)
    save_snapshot_raw(tmp_path / "snap", u, extent=2.0, t=0.7)
    back, meta = load_snapshot_raw(tmp_path / "snap")
    np.testing.assert_array_equal(back, u)
    assert meta == {"nx": 4, "ny": 3, "L": 2.0, "t": 0.7}


def test_table_writers(tmp_path):
    save_energy_csv(tmp_path / "e.csv", [(0.0, 1.0), (0.1, 1.0000001)])
    rows = np.loadtxt(tmp_path / "e.csv", delimiter=",", skiprows=1)
    assert rows.shape == (2, 2)
    save_profile_csv(tmp_path / "p.csv", np.array([0.0, 1.0]),
                     np.array([0.3, 0.1]))
    header = (tmp_path / "p.csv").read_text().splitlines()[0]
    assert header == "s,P"


# --- end-to-end CLI runs -----------------------------------------------------


def run_cli(tmp_path, command, entries, seed=0):
    cfg = tmp_path / f"{command}.cfg"
    write_manifest(cfg, entries)
    out = tmp_path / f"{command}_out"
    code = main([command, "--manifest", str(cfg), "--out", str(out),
                 "--seed", str(seed)])
    report = None
    if (out / "report.json").exists():
        report = json.loads((out / "report.json").read_text())
    return code, out, report


def test_cli_verify_metric(tmp_path):
    code, out, report = run_cli(tmp_path, "verify-metric", {
        "alpha": "0.5", "n_eigen": "2000", "n_margin": "20000",
        "n_pullback": "300", "sobolev_k_max": "8"})
    assert code == 0
    assert report["all_pass"]
    assert (out / "sobolev_masses.csv").exists()
    assert (out / "sobolev_masses.png").exists()
    assert (out / "margins.png").exists()


def test_cli_verify_metric_deterministic(tmp_path):
    _, _, rep1 = run_cli(tmp_path, "verify-metric", {
        "alpha": "0.4", "n_eigen": "500", "n_margin": "500",
        "n_pullback": "50", "sobolev_k_max": "6"}, seed=42)
    (tmp_path / "verify-metric.cfg").unlink()
    _, _, rep2 = run_cli(tmp_path, "verify-metric", {
        "alpha": "0.4", "n_eigen": "500", "n_margin": "500",
        "n_pullback": "50", "sobolev_k_max": "6"}, seed=42)
    assert rep1 == rep2
    assert rep1["seed"] == 42


def test_cli_bad_manifest(tmp_path, capsys):
    code, _, report = run_cli(tmp_path, "verify-metric", {"alpha": "1.7"})
    assert code == 2
    assert report is None
    assert "manifest error" in capsys.readouterr().err


def test_cli_regularize_variants(tmp_path):
    code, out, report = run_cli(tmp_path, "regularize", {
        "alpha": "0.5", "mollifier": "gaussian", "eps_list": "1, 0.1",
        "n_samples": "4000"})
    assert code == 0 and report["all_pass"]
    assert (out / "profile.csv").exists()
    assert (out / "response_eps_1.csv").exists()
    assert (out / "admissibility.json").exists()
    assert (out / "mollifier.cfg").exists()
    assert (out / "responses.png").exists()

    code, out, report = run_cli(tmp_path, "regularize", {
        "alpha": "0.2", "mollifier": "bump-ring-net",
        "eps_list": "0.12, 0.05", "n_samples": "2000"})
    assert code == 0 and report["all_pass"]
    adm = json.loads((out / "admissibility.json").read_text())
    assert [e["admissible"] for e in adm] == [False, True]
    assert report["eps_threshold"] == pytest.approx(1.0 / 12.0, abs=1e-6)

    # variant B inadmissible below the alpha threshold: decision still exact
    code, out, report = run_cli(tmp_path, "regularize", {
        "alpha": "0.3", "mollifier": "gauss-moment2", "eps_list": "0.5",
        "n_samples": "1000"})
    assert code == 0 and report["all_pass"]
    adm = json.loads((out / "admissibility.json").read_text())
    assert adm[0]["admissible"] is False


def test_cli_wave_convergence(tmp_path):
    code, out, report = run_cli(tmp_path, "wave", {
        "task": "convergence", "alpha": "1.0", "grid_list": "32, 64, 128",
        "t_final": "0.4"})
    assert code == 0 and report["all_pass"]
    assert (out / "convergence.csv").exists()
    assert (out / "convergence.png").exists()


def test_cli_wave_drift_and_snapshots(tmp_path):
    code, out, report = run_cli(tmp_path, "wave", {
        "task": "drift", "alpha": "0.5", "eps": "0.1", "grid_n": "96",
        "t_final": "0.15"})
    assert code == 0 and report["all_pass"]
    assert (out / "energy_trace.csv").exists()
    u, meta = load_snapshot_raw(out / "snapshot_final")
    assert u.shape == (96, 96)
    assert meta["t"] == pytest.approx(0.15)
    assert (out / "snapshot_final.csv").exists()
    assert (out / "snapshot_final.png").exists()
    assert (out / "energy_trace.png").exists()


def test_cli_wave_failing_tolerance(tmp_path):
    code, _, report = run_cli(tmp_path, "wave", {
        "task": "drift", "alpha": "0.5", "eps": "0.1", "grid_n": "64",
        "t_final": "0.1", "c_cfl": "0.5", "drift_tol": "1e-12"})
    assert code == 1
    assert not report["all_pass"]


def test_cli_wave_epsilon_study_small(tmp_path):
    code, out, report = run_cli(tmp_path, "wave", {
        "task": "epsilon-study", "alpha": "0.5", "grid_n": "128",
        "box_extent": "8.0", "eps_list": "1, 0.5, 0.25",
        "t_final": "3.0"})
    assert code == 0 and report["all_pass"]
    assert (out / "epsilon_study.json").exists()
    assert (out / "epsilon_distances.csv").exists()


def test_cli_curves(tmp_path):
    code, out, report = run_cli(tmp_path, "curves", {
        "task": "all", "alpha": "0.5", "corpus_size": "6"}, seed=5)
    assert code == 0 and report["all_pass"]
    assert (out / "example_i.json").exists()
    assert (out / "example_ii.json").exists()
    assert (out / "example_i_family" / "family.cfg").exists()
    fam = load_family(out / "example_i_family" / "family.cfg")
    assert len(fam.members) == 7
    assert (out / "class_reports.json").exists()
    assert (out / "example_i_crossings.png").exists()
    assert (out / "oscillation_family.png").exists()
