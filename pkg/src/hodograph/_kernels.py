"""Hot numeric kernels with numba and numpy implementations.

State rows are ``(x, y, px, py)``.  Both implementations of each kernel must
agree to rounding; ``tests/test_kernels.py`` enforces that.
"""

from __future__ import annotations

import numpy as np

from ._accel import get_backend, njit

# RK4 status codes
OK = 0
COLLISION = 1


# ---------------------------------------------------------------- RK4


@njit
def _rk4_numba(y0, k, dt, n_steps, r_min):
    n_traj = y0.shape[0]
    out = np.empty((n_steps + 1, n_traj, 4))
    out[0] = y0
    status = OK
    for j in range(n_traj):
        x, y, px, py = y0[j, 0], y0[j, 1], y0[j, 2], y0[j, 3]
        for i in range(n_steps):
            r = np.sqrt(x * x + y * y)
            if r < r_min:
                return out, COLLISION, i
            c = -k / (r * r * r)
            k1x, k1y, k1px, k1py = px, py, c * x, c * y

            x2 = x + 0.5 * dt * k1x
            y2 = y + 0.5 * dt * k1y
            r = np.sqrt(x2 * x2 + y2 * y2)
            if r < r_min:
                return out, COLLISION, i
            c = -k / (r * r * r)
            k2x, k2y = px + 0.5 * dt * k1px, py + 0.5 * dt * k1py
            k2px, k2py = c * x2, c * y2

            x3 = x + 0.5 * dt * k2x
            y3 = y + 0.5 * dt * k2y
            r = np.sqrt(x3 * x3 + y3 * y3)
            if r < r_min:
                return out, COLLISION, i
            c = -k / (r * r * r)
            k3x, k3y = px + 0.5 * dt * k2px, py + 0.5 * dt * k2py
            k3px, k3py = c * x3, c * y3

            x4 = x + dt * k3x
            y4 = y + dt * k3y
            r = np.sqrt(x4 * x4 + y4 * y4)
            if r < r_min:
                return out, COLLISION, i
            c = -k / (r * r * r)
            k4x, k4y = px + dt * k3px, py + dt * k3py
            k4px, k4py = c * x4, c * y4

            h = dt / 6.0
            x = x + h * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y = y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            px = px + h * (k1px + 2.0 * k2px + 2.0 * k3px + k4px)
            py = py + h * (k1py + 2.0 * k2py + 2.0 * k3py + k4py)
            out[i + 1, j, 0] = x
            out[i + 1, j, 1] = y
            out[i + 1, j, 2] = px
            out[i + 1, j, 3] = py
        r = np.sqrt(x * x + y * y)
        if r < r_min:
            return out, COLLISION, n_steps
    return out, status, n_steps


def _rhs(y, k):
    r = np.hypot(y[:, 0], y[:, 1])
    c = -k / (r * r * r)
    return np.column_stack([y[:, 2], y[:, 3], c * y[:, 0], c * y[:, 1]]), r


def _rk4_numpy(y0, k, dt, n_steps, r_min):
    out = np.empty((n_steps + 1,) + y0.shape)
    out[0] = y0
    y = y0.copy()
    for i in range(n_steps):
        k1, r = _rhs(y, k)
        if r.min() < r_min:
            return out, COLLISION, i
        k2, r = _rhs(y + 0.5 * dt * k1, k)
        if r.min() < r_min:
            return out, COLLISION, i
        k3, r = _rhs(y + 0.5 * dt * k2, k)
        if r.min() < r_min:
            return out, COLLISION, i
        k4, r = _rhs(y + dt * k3, k)
        if r.min() < r_min:
            return out, COLLISION, i
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = y
    if np.hypot(y[:, 0], y[:, 1]).min() < r_min:
        return out, COLLISION, n_steps
    return out, OK, n_steps


def rk4_integrate(y0, k: float, dt: float, n_steps: int, r_min: float):
    """Integrate a batch of Kepler states with classical RK4.

    ``y0`` has shape ``(n_traj, 4)``.  Returns ``(states, status, last_step)``
    with ``states`` of shape ``(n_steps + 1, n_traj, 4)``; on collision only
    rows ``0..last_step`` are valid.
    """
    y0 = np.ascontiguousarray(y0, dtype=np.float64)
    if get_backend() == "numba":
        return _rk4_numba(y0, float(k), float(dt), int(n_steps), float(r_min))
    return _rk4_numpy(y0, float(k), float(dt), int(n_steps), float(r_min))


# ---------------------------------------------------------------- conserved quantities


@njit
def _invariants_numba(states, k):
    n = states.shape[0]
    out = np.empty((n, 4))
    for i in range(n):
        x, y, px, py = states[i, 0], states[i, 1], states[i, 2], states[i, 3]
        r = np.sqrt(x * x + y * y)
        L = x * py - y * px
        out[i, 0] = 0.5 * (px * px + py * py) - k / r
        out[i, 1] = L
        # A = -L * star(p) - k r/|r|,  star(p) = (-py, px)
        out[i, 2] = L * py - k * x / r
        out[i, 3] = -L * px - k * y / r
    return out


def _invariants_numpy(states, k):
    x, y, px, py = states.T
    r = np.hypot(x, y)
    L = x * py - y * px
    E = 0.5 * (px * px + py * py) - k / r
    return np.column_stack([E, L, L * py - k * x / r, -L * px - k * y / r])


def invariants(states, k: float) -> np.ndarray:
    """Rows ``(E, L, A.x, A.y)`` for each state row ``(x, y, px, py)``."""
    states = np.ascontiguousarray(np.atleast_2d(states), dtype=np.float64)
    if get_backend() == "numba":
        return _invariants_numba(states, float(k))
    return _invariants_numpy(states, float(k))


@njit
def _lrl_rate_numba(states, k):
    n = states.shape[0]
    out = np.empty((n, 2))
    for i in range(n):
        x, y, px, py = states[i, 0], states[i, 1], states[i, 2], states[i, 3]
        r = np.sqrt(x * x + y * y)
        L = x * py - y * px
        ux, uy = x / r, y / r
        fx, fy = -k * ux / (r * r), -k * uy / (r * r)
        # F x L = -L * star(F)
        fl_x, fl_y = L * fy, -L * fx
        # d/dt (r/|r|) = (p - (u.p) u) / r
        up = ux * px + uy * py
        dux, duy = (px - up * ux) / r, (py - up * uy) / r
        out[i, 0] = fl_x - k * dux
        out[i, 1] = fl_y - k * duy
    return out


def _lrl_rate_numpy(states, k):
    x, y, px, py = states.T
    r = np.hypot(x, y)
    L = x * py - y * px
    ux, uy = x / r, y / r
    fx, fy = -k * ux / (r * r), -k * uy / (r * r)
    up = ux * px + uy * py
    dux, duy = (px - up * ux) / r, (py - up * uy) / r
    return np.column_stack([L * fy - k * dux, -L * fx - k * duy])


def lrl_rate(states, k: float) -> np.ndarray:
    """Closed-form ``dA/dt`` under the Kepler force, one row per state."""
    states = np.ascontiguousarray(np.atleast_2d(states), dtype=np.float64)
    if get_backend() == "numba":
        return _lrl_rate_numba(states, float(k))
    return _lrl_rate_numpy(states, float(k))
