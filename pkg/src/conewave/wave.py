"""Divergence-form finite-difference solver for the smoothed conical wave
equation, u_tt = (1/w) d_i ( w rho^{ij} d_j u ) + f with w = sqrt(det rho).

Everything is 2+1 dimensional: the metric does not depend on z, so
z-independent data stays z-independent and the z-derivatives drop out.
The grid is cell-centered, which keeps every stencil point at least half
a cell away from the axis; the box boundary carries homogeneous
Dirichlet values and runs are meant to stop before the domain of
influence reaches it.

The spatial operator is assembled as a sparse quadratic form

    Q = Dxf' ax Dxf + Dyf' cy Dyf + Dxc' b Dyc + Dyc' b Dxc

(face-difference and centered-difference operators with odd-reflection
ghosts), so symmetry of the weighted form is structural and the discrete
energy h^2 (sum w v^2 + u' Q u) is nonnegative whenever Q is.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from .causal import PreconditionError
from .mollify import RegularizedField, beta as lowerbound_beta


class AssemblyError(RuntimeError):
    """The smoothed spatial metric failed positivity during assembly."""


@dataclass(frozen=True)
class Grid2D:
    """Cell-centered square grid on [-L, L]^2 with an even cell count."""

    n: int
    extent: float = 1.0
    cfl: float = 0.5
    boundary: str = "dirichlet"

    def __post_init__(self):
        if self.n % 2 != 0 or self.n < 4:
            raise ValueError("cell count must be even (keeps the axis off-grid)")
        if self.boundary != "dirichlet":
            raise ValueError(f"unsupported boundary treatment {self.boundary!r}")

    @property
    def h(self) -> float:
        return 2.0 * self.extent / self.n

    @property
    def centers(self) -> np.ndarray:
        return -self.extent + (np.arange(self.n) + 0.5) * self.h

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        c = self.centers
        return np.meshgrid(c, c, indexing="ij")


def _face_diff_1d(n: int, h: float) -> sparse.csr_matrix:
    """(n+1) x n face differences with zero Dirichlet values at the faces.

    The boundary rows carry sqrt(2)/h so that the induced quadratic form
    reproduces the flux-form stencil (u_1 - 3 u_0)/h^2, which keeps the
    scheme second-order up to the boundary.
    """
    rows, cols, vals = [], [], []
    rows.append(0); cols.append(0); vals.append(np.sqrt(2.0) / h)
    for i in range(1, n):
        rows += [i, i]
        cols += [i - 1, i]
        vals += [-1.0 / h, 1.0 / h]
    rows.append(n); cols.append(n - 1); vals.append(-np.sqrt(2.0) / h)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n + 1, n))


def _centered_diff_1d(n: int, h: float) -> sparse.csr_matrix:
    """n x n centered differences with odd-reflection ghosts."""
    rows, cols, vals = [], [], []
    rows += [0, 0]; cols += [0, 1]; vals += [0.5 / h, 0.5 / h]
    for i in range(1, n - 1):
        rows += [i, i]
        cols += [i - 1, i + 1]
        vals += [-0.5 / h, 0.5 / h]
    rows += [n - 1, n - 1]; cols += [n - 2, n - 1]; vals += [-0.5 / h, -0.5 / h]
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


@dataclass
class SpatialOperator:
    """Assembled divergence-form operator A = -(1/w) Q on a Grid2D."""

    grid: Grid2D
    eps: float
    quadratic_form: sparse.csr_matrix   # Q, symmetric positive semidefinite
    weights: np.ndarray                 # w = sqrt(det rho) at cells, (n, n)
    max_speed: float                    # sup over cells of sqrt(lambda_max(rho^{-1}))

    def apply(self, u: np.ndarray) -> np.ndarray:
        flat = self.quadratic_form @ u.reshape(-1)
        return -(flat.reshape(u.shape) / self.weights)

    def form_energy(self, u: np.ndarray) -> float:
        """u' Q u, the discrete Dirichlet energy without the h^2 measure."""
        flat = u.reshape(-1)
        return float(flat @ (self.quadratic_form @ flat))

    def dense(self) -> np.ndarray:
        """Dense Q for small-grid oracle checks."""
        return self.quadratic_form.toarray()

    def cfl_limit(self, c_cfl: Optional[float] = None) -> float:
        c = self.grid.cfl if c_cfl is None else c_cfl
        return c * self.grid.h / self.max_speed


def assemble(regfield: RegularizedField, eps: float, grid: Grid2D) -> SpatialOperator:
    """Build the spatial operator for the smoothed metric at scale eps.

    Fails fast when the (alpha, mollifier, eps) combination is
    inadmissible, and raises AssemblyError on any nonpositive sampled
    metric, which the bound rules out.
    """
    b = lowerbound_beta(regfield.params, regfield.mollifier, eps)
    if b is None or b <= 0.0:
        raise PreconditionError(
            f"inadmissible pair: alpha={regfield.params.alpha}, "
            f"mollifier={regfield.mollifier.label}, eps={eps}")
    X, Y = grid.mesh()
    f1, f2 = regfield.eval(eps, X, Y)
    a2 = regfield.params.alpha ** 2
    sym = 0.5 * (1.0 + a2)
    dev = 0.5 * (1.0 - a2)
    rxx = sym + dev * f1
    ryy = sym - dev * f1
    rxy = dev * f2
    det = rxx * ryy - rxy * rxy
    if np.any(det <= 0.0) or np.any(rxx <= 0.0):
        raise AssemblyError("smoothed spatial metric not positive definite on grid")
    w = np.sqrt(det)
    # inverse of the planar block, scaled by w
    A = w * ryy / det
    C = w * rxx / det
    B = -w * rxy / det
    # eigenvalues of rho^{-1}: (trace +- sqrt(trace^2 - 4 det^{-1}))/2
    tr_inv = (rxx + ryy) / det
    disc = np.sqrt(np.maximum(tr_inv ** 2 - 4.0 / det, 0.0))
    lam_max_inv = 0.5 * (tr_inv + disc)
    max_speed = float(np.sqrt(lam_max_inv.max()))

    n, h = grid.n, grid.h
    ax = np.empty((n + 1, n))
    ax[1:-1, :] = 0.5 * (A[1:, :] + A[:-1, :])
    ax[0, :] = A[0, :]
    ax[-1, :] = A[-1, :]
    cy = np.empty((n, n + 1))
    cy[:, 1:-1] = 0.5 * (C[:, 1:] + C[:, :-1])
    cy[:, 0] = C[:, 0]
    cy[:, -1] = C[:, -1]

    eye = sparse.identity(n, format="csr")
    dxf = sparse.kron(_face_diff_1d(n, h), eye, format="csr")
    dyf = sparse.kron(eye, _face_diff_1d(n, h), format="csr")
    dxc = sparse.kron(_centered_diff_1d(n, h), eye, format="csr")
    dyc = sparse.kron(eye, _centered_diff_1d(n, h), format="csr")

    q = (dxf.T @ sparse.diags(ax.reshape(-1)) @ dxf
         + dyf.T @ sparse.diags(cy.reshape(-1)) @ dyf
         + dxc.T @ sparse.diags(B.reshape(-1)) @ dyc
         + dyc.T @ sparse.diags(B.reshape(-1)) @ dxc).tocsr()
    return SpatialOperator(grid, eps, q, w, max_speed)


@dataclass
class WaveState:
    """Grid functions (u, du/dt) at a time, plus the accumulated energy trace."""

    u: np.ndarray
    v: np.ndarray
    t: float = 0.0
    energy_trace: List[Tuple[float, float]] = field(default_factory=list)
    _accel: Optional[np.ndarray] = None

    def copy(self) -> "WaveState":
        return WaveState(self.u.copy(), self.v.copy(), self.t,
                         list(self.energy_trace))


def energy(state: WaveState, op: SpatialOperator) -> float:
    """Discrete energy h^2 [ sum w v^2 + u' Q u ]; nonnegative."""
    h2 = op.grid.h ** 2
    kinetic = float(np.sum(op.weights * state.v ** 2))
    return h2 * (kinetic + op.form_energy(state.u))


def step(state: WaveState, op: SpatialOperator, dt: float,
         forcing: Optional[np.ndarray] = None,
         c_cfl: Optional[float] = None) -> WaveState:
    """One velocity-Verlet step; reversible, second order, CFL-guarded."""
    limit = op.cfl_limit(c_cfl)
    if dt > limit * (1.0 + 1e-12):
        raise PreconditionError(f"dt={dt} exceeds CFL limit {limit}")
    if state._accel is None:
        acc = op.apply(state.u)
        if forcing is not None:
            acc = acc + forcing
        state._accel = acc
    v_half = state.v + 0.5 * dt * state._accel
    u_new = state.u + dt * v_half
    acc_new = op.apply(u_new)
    if forcing is not None:
        acc_new = acc_new + forcing
    v_new = v_half + 0.5 * dt * acc_new
    out = WaveState(u_new, v_new, state.t + dt, state.energy_trace)
    out._accel = acc_new
    return out


def solve(op: SpatialOperator, u0: np.ndarray, v0: np.ndarray, t_final: float,
          dt: Optional[float] = None, c_cfl: Optional[float] = None,
          forcing: Optional[np.ndarray] = None,
          record_energy: bool = True) -> WaveState:
    """March to t_final with a fixed step fitting the CFL limit exactly.

    When dt is given it is shrunk slightly so an integer number of steps
    lands exactly on t_final; otherwise the largest admissible step is
    used.
    """
    target = dt if dt is not None else op.cfl_limit(c_cfl)
    n_steps = max(1, int(np.ceil(t_final / target - 1e-12)))
    dt = t_final / n_steps
    state = WaveState(np.array(u0, dtype=float), np.array(v0, dtype=float))
    if record_energy:
        state.energy_trace.append((0.0, energy(state, op)))
    for _ in range(n_steps):
        state = step(state, op, dt, forcing, c_cfl)
        if record_energy:
            state.energy_trace.append((state.t, energy(state, op)))
    return state


def energy_drift(state: WaveState) -> float:
    """Max relative deviation of the energy trace from its initial value."""
    if len(state.energy_trace) < 2:
        return 0.0
    e = np.array([val for _, val in state.energy_trace])
    if e[0] == 0.0:
        return float(np.max(np.abs(e)))
    return float(np.max(np.abs(e - e[0])) / e[0])


# ---------------------------------------------------------------------------
# Initial data


def gaussian_bump(grid: Grid2D, center=(0.0, 0.0), width: float = 0.15,
                  amplitude: float = 1.0):
    X, Y = grid.mesh()
    r2 = (X - center[0]) ** 2 + (Y - center[1]) ** 2
    u0 = amplitude * np.exp(-r2 / width ** 2)
    return u0, np.zeros_like(u0)


def cone_hat(grid: Grid2D, center=(0.0, 0.0), width: float = 0.2,
             amplitude: float = 1.0):
    """Piecewise-linear radial hat: in H^1 but not C^1."""
    X, Y = grid.mesh()
    r = np.hypot(X - center[0], Y - center[1])
    u0 = amplitude * np.maximum(0.0, 1.0 - r / width)
    return u0, np.zeros_like(u0)


def disk_indicator(grid: Grid2D, center=(0.0, 0.0), width: float = 0.2,
                   amplitude: float = 1.0):
    """Indicator-like data, used as the rough velocity component."""
    X, Y = grid.mesh()
    r = np.hypot(X - center[0], Y - center[1])
    v0 = amplitude * (r <= width).astype(float)
    return np.zeros_like(v0), v0

def standing_mode(grid: Grid2D, m: int = 1, n: int = 1, amplitude: float = 1.0):
    """Dirichlet eigenmode of the flat box; exact flat solution is
    u0 cos(omega t) with omega = (pi/2L) sqrt(m^2 + n^2)."""
    L = grid.extent
    X, Y = grid.mesh()
    u0 = amplitude * (np.sin(m * np.pi * (X + L) / (2 * L))
                      * np.sin(n * np.pi * (Y + L) / (2 * L)))
    return u0, np.zeros_like(u0)


def standing_mode_frequency(grid: Grid2D, m: int, n: int) -> float:
    return 0.5 * np.pi / grid.extent * np.hypot(m, n)


DATA_FACTORIES: Dict[str, Callable] = {
    "gaussian": gaussian_bump,
    "hat": cone_hat,
    "indicator": disk_indicator,
    "standing": standing_mode,
}


@dataclass(frozen=True)
class EpsilonStudy:
    eps_values: tuple
    distances: tuple          # ||u_{e_k}(T) - u_{e_{k+1}}(T)||_{L^2}
    t_final: float
    grid_n: int
    monotone: bool


def epsilon_study(regfield: RegularizedField, eps_values: Sequence[float],
                  grid: Grid2D, data: Tuple[np.ndarray, np.ndarray],
                  t_final: float, c_cfl: Optional[float] = None) -> EpsilonStudy:
    """Solve with identical data and time step across eps; report the
    pairwise discrete-L2 distances of the final states along the net."""
    eps_values = sorted(eps_values, reverse=True)
    ops = [assemble(regfield, e, grid) for e in eps_values]
    limit = min(op.cfl_limit(c_cfl) for op in ops)
    n_steps = max(1, int(np.ceil(t_final / limit - 1e-12)))
    dt = t_final / n_steps
    u0, v0 = data
    finals = []
    for op in ops:
        st = solve(op, u0, v0, t_final, dt=dt, c_cfl=c_cfl, record_energy=False)
        finals.append(st.u)
    h = grid.h
    dists = tuple(float(h * np.linalg.norm(a - b))
                  for a, b in zip(finals[:-1], finals[1:]))
    monotone = all(a > b for a, b in zip(dists[:-1], dists[1:]))
    return EpsilonStudy(tuple(eps_values), dists, t_final, grid.n, monotone)
