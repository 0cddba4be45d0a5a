"""File interfaces: flat key-value manifests, curve/profile CSVs, snapshots.

Everything here is deliberately plain: manifests are ``key = value``
lines with ``#`` comments, tables are headed CSV, grid snapshots are
either flat CSV or raw little-endian float64 with a JSON sidecar.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .causal import CurveFamily, SampledCurve
from .mollify import MOLLIFIER_FACTORIES, MollifierSpec


class ManifestError(ValueError):
    """A manifest failed to parse or violated an invariant."""


def read_manifest(path) -> Dict[str, str]:
    data: Dict[str, str] = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ManifestError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        data[key.strip()] = value.strip()
    return data


def write_manifest(path, entries: Dict[str, str]):
    lines = [f"{k} = {v}" for k, v in entries.items()]
    Path(path).write_text("\n".join(lines) + "\n")


class Manifest:
    """Typed access to a flat key-value manifest."""

    def __init__(self, entries: Dict[str, str], base_dir: Optional[Path] = None):
        self.entries = entries
        self.base_dir = Path(base_dir) if base_dir else Path.cwd()

    @classmethod
    def load(cls, path) -> "Manifest":
        path = Path(path)
        return cls(read_manifest(path), base_dir=path.parent)

    def has(self, key: str) -> bool:
        return key in self.entries

    def get_str(self, key: str, default: Optional[str] = None) -> str:
        if key in self.entries:
            return self.entries[key]
        if default is None:
            raise ManifestError(f"missing manifest key {key!r}")
        return default

    def get_float(self, key: str, default: Optional[float] = None) -> float:
        if key not in self.entries:
            if default is None:
                raise ManifestError(f"missing manifest key {key!r}")
            return default
        try:
            return float(self.entries[key])
        except ValueError as exc:
            raise ManifestError(f"manifest key {key!r}: {exc}") from None

    def get_int(self, key: str, default: Optional[int] = None) -> int:
        if key not in self.entries:
            if default is None:
                raise ManifestError(f"missing manifest key {key!r}")
            return default
        try:
            return int(self.entries[key])
        except ValueError as exc:
            raise ManifestError(f"manifest key {key!r}: {exc}") from None

    def get_floats(self, key: str, default: Optional[Sequence[float]] = None
                   ) -> List[float]:
        if key not in self.entries:
            if default is None:
                raise ManifestError(f"missing manifest key {key!r}")
            return list(default)
        try:
            return [float(tok) for tok in self.entries[key].split(",") if tok.strip()]
        except ValueError as exc:
            raise ManifestError(f"manifest key {key!r}: {exc}") from None

    def get_path(self, key: str) -> Path:
        p = Path(self.get_str(key))
        if not p.is_absolute():
            p = self.base_dir / p
        if not p.exists():
            raise ManifestError(f"manifest key {key!r}: path {p} does not exist")
        return p

    def get_eps_list(self, key: str = "eps_list",
                     default: Optional[Sequence[float]] = None) -> List[float]:
        eps = self.get_floats(key, default)
        if any(e <= 0.0 for e in eps):
            raise ManifestError("eps values must be positive")
        if any(a <= b for a, b in zip(eps, eps[1:])):
            raise ManifestError("eps values must be sorted descending")
        return eps

    def get_alpha(self, key: str = "alpha") -> float:
        a = self.get_float(key)
        if not (0.0 < a <= 1.0):
            raise ManifestError(f"alpha must lie in (0, 1], got {a}")
        return a


# ---------------------------------------------------------------------------
# Curves


CURVE_COLUMNS = ("s", "t", "x", "y", "z")
CURVE_COLUMNS_D = CURVE_COLUMNS + ("dt", "dx", "dy", "dz")


def save_curve_csv(path, curve: SampledCurve, with_derivatives: bool = True):
    if with_derivatives:
        table = np.column_stack([curve.s, curve.points, curve.velocities])
        header = ",".join(CURVE_COLUMNS_D)
    else:
        table = np.column_stack([curve.s, curve.points])
        header = ",".join(CURVE_COLUMNS)
    np.savetxt(path, table, delimiter=",", header=header, comments="")


def load_curve_csv(path) -> SampledCurve:
    with open(path) as fh:
        header = fh.readline().strip().lower().split(",")
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    cols = tuple(c.strip() for c in header)
    if cols == CURVE_COLUMNS_D:
        return SampledCurve(table[:, 0], table[:, 1:5], table[:, 5:9])
    if cols == CURVE_COLUMNS:
        return SampledCurve(table[:, 0], table[:, 1:5])
    raise ValueError(f"unrecognized curve CSV columns {cols} in {path}")


def save_family(dir_path, family: CurveFamily, stem: str = "curve"):
    """Write per-eps curve CSVs plus a key-value family manifest."""
    dir_path = Path(dir_path)
    dir_path.mkdir(parents=True, exist_ok=True)
    entries = {"eps_list": ", ".join(repr(e) for e in family.eps_values)}
    for eps in family.eps_values:
        fname = f"{stem}_eps{eps!r}.csv"
        save_curve_csv(dir_path / fname, family.members[eps])
        entries[f"curve_{eps!r}"] = fname
    write_manifest(dir_path / "family.cfg", entries)
    return dir_path / "family.cfg"


def load_family(manifest_path) -> CurveFamily:
    m = Manifest.load(manifest_path)
    eps_values = m.get_eps_list()
    members = {}
    for eps in eps_values:
        members[eps] = load_curve_csv(m.get_path(f"curve_{eps!r}"))
    return CurveFamily(members)


# ---------------------------------------------------------------------------
# Mollifier specs and tables


def save_mollifier_config(path, spec: MollifierSpec, eps: Optional[float] = None):
    entries = {
        "variant": spec.variant.value,
        "label": spec.label,
        "moment_order": str(spec.moment_order),
        "l1_norm": repr(spec.l1_at(eps)),
    }
    if eps is not None:
        entries["eps"] = repr(eps)
    write_manifest(path, entries)


def load_mollifier_config(path) -> MollifierSpec:
    m = Manifest.load(path)
    label = m.get_str("label")
    if label not in MOLLIFIER_FACTORIES:
        raise ManifestError(f"unknown mollifier label {label!r}")
    spec = MOLLIFIER_FACTORIES[label]()
    if spec.variant.value != m.get_str("variant"):
        raise ManifestError(f"variant mismatch for mollifier {label!r}")
    return spec


def save_profile_csv(path, s: np.ndarray, values: np.ndarray,
                     value_name: str = "P"):
    np.savetxt(path, np.column_stack([s, values]), delimiter=",",
               header=f"s,{value_name}", comments="")


# ---------------------------------------------------------------------------
# Solver artifacts


def save_energy_csv(path, trace):
    arr = np.asarray(trace, dtype=float)
    np.savetxt(path, arr, delimiter=",", header="t,E", comments="")


def save_snapshot_raw(path_base, u: np.ndarray, extent: float, t: float):
    """Raw little-endian float64 array plus a JSON sidecar (nx, ny, L, t)."""
    path_base = Path(path_base)
    raw = path_base.with_suffix(".f64")
    raw.write_bytes(np.ascontiguousarray(u, dtype="<f8").tobytes())
    sidecar = {"nx": int(u.shape[0]), "ny": int(u.shape[1]),
               "L": float(extent), "t": float(t)}
    path_base.with_suffix(".json").write_text(json.dumps(sidecar, indent=2))
    return raw


def load_snapshot_raw(path_base):
    path_base = Path(path_base)
    meta = json.loads(path_base.with_suffix(".json").read_text())
    flat = np.frombuffer(path_base.with_suffix(".f64").read_bytes(), dtype="<f8")
    u = flat.reshape(meta["nx"], meta["ny"])
    return u, meta


def save_snapshot_csv(path, u: np.ndarray):
    np.savetxt(path, u, delimiter=",")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def write_json_report(path, payload: dict):
    Path(path).write_text(json.dumps(_jsonable(payload), indent=2) + "\n")
