"""Seeded synthetic curve corpora used by the CLI reports and the test suite."""

from __future__ import annotations

from typing import List

import numpy as np

from .causal import SampledCurve
from .curvetop import ParamCurve01


def smooth_curve(rng: np.random.Generator, n_nodes: int = 1024,
                 n_modes: int = 3, wiggle: float = 0.3) -> SampledCurve:
    """A random smooth curve on [0, 1]: a segment plus low-mode Fourier
    wiggles whose peak speed is a fixed fraction of the segment speed, so
    the parametrization stays far from singular."""
    p = rng.uniform(-1.0, 1.0, size=4)
    q = p + rng.uniform(0.8, 1.5) * _random_direction(rng)
    base_speed = float(np.linalg.norm(q - p))
    amps = rng.standard_normal((n_modes, 4))
    freqs = np.pi * np.arange(1, n_modes + 1)
    peak = float(np.sum(np.linalg.norm(amps, axis=1) * freqs))
    amps *= wiggle * base_speed / (peak + 1e-12)
    s = np.linspace(0.0, 1.0, n_nodes)
    pts = p[None, :] + s[:, None] * (q - p)[None, :]
    vel = np.tile(q - p, (n_nodes, 1)).astype(float)
    for k in range(n_modes):
        pts += amps[k][None, :] * np.sin(freqs[k] * s)[:, None]
        vel += amps[k][None, :] * freqs[k] * np.cos(freqs[k] * s)[:, None]
    return SampledCurve(s, pts, vel)


def _random_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(4)
    return v / np.linalg.norm(v)


def reparametrized_copy(curve: SampledCurve, rng: np.random.Generator
                        ) -> SampledCurve:
    """The same image under a random smooth orientation-preserving warp."""
    a = rng.uniform(0.2, 0.8)
    warp = lambda s: s + a * s * (1.0 - s) * (2.0 * s - 1.0)
    dwarp = lambda s: 1.0 - a * (6.0 * s * s - 6.0 * s + 1.0)
    s = np.linspace(0.0, 1.0, curve.n_nodes)
    w = warp(s)
    pts = curve(w)
    vel = curve.velocity(w) * dwarp(s)[:, None]
    return SampledCurve(s, pts, vel)


def timelike_curve(rng: np.random.Generator, n_nodes: int = 181,
                   s_span: float = 2.0, max_spatial_speed: float = 0.85,
                   center=(0.6, 0.4, 0.0)) -> SampledCurve:
    """A strictly timelike curve for the conical metric (any alpha <= 1).

    gamma(s) = (s, x(s)): the planar spatial metric has top eigenvalue 1,
    so a Euclidean spatial speed below 1 keeps g(gdot, gdot) < 0 for both
    the exact and the variant-A smoothed metric.
    """
    n_modes = 3
    amps = rng.standard_normal((n_modes, 3)) / np.arange(1, n_modes + 1)[:, None] ** 2
    freqs = np.pi * np.arange(1, n_modes + 1) / (2.0 * s_span)
    peak = float(np.sum(np.linalg.norm(amps, axis=1) * freqs))
    amps *= max_spatial_speed / (peak + 1e-12)
    s = np.linspace(-s_span, s_span, n_nodes)
    pts = np.zeros((n_nodes, 4))
    vel = np.zeros((n_nodes, 4))
    pts[:, 0] = s
    vel[:, 0] = 1.0
    pts[:, 1:] = np.asarray(center)[None, :]
    for k in range(n_modes):
        pts[:, 1:] += amps[k][None, :] * np.sin(freqs[k] * s)[:, None]
        vel[:, 1:] += amps[k][None, :] * freqs[k] * np.cos(freqs[k] * s)[:, None]
    return SampledCurve(s, pts, vel)


def oscillation_family(n_values, n_nodes: int = 2049) -> List[ParamCurve01]:
    """Segment plus (1/n) sin(n pi s) transverse offsets: uniformly Lipschitz,
    uniformly convergent to the segment."""
    out = []
    s = np.linspace(0.0, 1.0, n_nodes)
    base = np.stack([s, s, np.zeros_like(s), np.zeros_like(s)], axis=1)
    dbase = np.stack([np.ones_like(s), np.ones_like(s),
                      np.zeros_like(s), np.zeros_like(s)], axis=1)
    for n in n_values:
        pts = base.copy()
        vel = dbase.copy()
        pts[:, 2] += np.sin(n * np.pi * s) / n
        vel[:, 2] += np.pi * np.cos(n * np.pi * s)
        out.append(ParamCurve01(s, pts, vel))
    return out
