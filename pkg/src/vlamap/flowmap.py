"""Backward characteristic map: advection, remapping, composition, zoom.

The map is stored as two Hermite displacement fields (X - x, V - v), both
periodic on the torus even though the raw map components are not.  One
step advects every node and its derivative stencil backward with RK3
through the current map; when the Jacobian-determinant error of the
active map exceeds the threshold, the map is archived on the stack and
restarted from the identity.  Evaluation composes the active map with
the archived submaps from latest to earliest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import BlowUpError, ConfigurationError, StateError
from .grids import Grid2D, HermiteField2D, jet_from_stencil


@dataclass
class BackwardMap:
    """Displacement form of the backward map over [t_start, t_end]."""

    disp_x: HermiteField2D
    disp_v: HermiteField2D
    t_start: float = 0.0
    t_end: float = 0.0

    @property
    def grid(self) -> Grid2D:
        return self.disp_x.grid


def identity_map(grid: Grid2D, t: float = 0.0) -> BackwardMap:
    """Fresh map with zero displacement and zero derivative data."""
    return BackwardMap(HermiteField2D.zeros(grid), HermiteField2D.zeros(grid), t, t)


def map_apply(bmap: BackwardMap, x, v):
    """Evaluate the map interpolant: (x, v) -> (x + dX, v + dV)."""
    g = bmap.grid
    xa, va = np.broadcast_arrays(
        np.asarray(x, dtype=np.float64), np.asarray(v, dtype=np.float64)
    )
    X, V = kernels.map_apply_batch(
        *bmap.disp_x.arrays(), *bmap.disp_v.arrays(),
        g.x0, g.v0, g.hx, g.hv,
        np.ascontiguousarray(xa.ravel()), np.ascontiguousarray(va.ravel()),
    )
    if xa.shape == ():
        return float(X[0]), float(V[0])
    return X.reshape(xa.shape), V.reshape(xa.shape)


class StreamVelocity:
    """Velocity evaluator backed by a stream-function Hermite field."""

    def __init__(self, psi: HermiteField2D):
        self.psi = psi

    def velocity(self, x, v):
        g = self.psi.grid
        xa, va = np.broadcast_arrays(
            np.asarray(x, dtype=np.float64), np.asarray(v, dtype=np.float64)
        )
        u1, u2 = kernels.stream_velocity_batch(
            *self.psi.arrays(), g.x0, g.v0, g.hx, g.hv,
            np.ascontiguousarray(xa.ravel()), np.ascontiguousarray(va.ravel()),
        )
        if xa.shape == ():
            return float(u1[0]), float(u2[0])
        return u1.reshape(xa.shape), u2.reshape(xa.shape)


class VelocityHistory:
    """Up to three stream-function snapshots, newest first."""

    maxlen = 3

    def __init__(self):
        self.times: list[float] = []
        self.fields: list[HermiteField2D] = []

    def __len__(self) -> int:
        return len(self.times)

    def push(self, t: float, psi: HermiteField2D) -> None:
        if self.times and t <= self.times[0]:
            raise StateError(f"snapshot times must increase, got {t} after {self.times[0]}")
        self.times.insert(0, t)
        self.fields.insert(0, psi)
        del self.times[self.maxlen:], self.fields[self.maxlen:]


def _lagrange_weights(times, t):
    ws = []
    for m, tm in enumerate(times):
        w = 1.0
        for j, tj in enumerate(times):
            if j != m:
                w *= (t - tj) / (tm - tj)
        ws.append(w)
    return ws


def extrapolated_velocity(history: VelocityHistory, t_query: float) -> StreamVelocity:
    """Velocity evaluator Lagrange-extrapolated in time from the history.

    One snapshot gives constant extrapolation, two linear, three quadratic.
    The combination happens on the node data, which is exact because the
    interpolant is linear in its node data.
    """
    if len(history) == 0:
        raise StateError("velocity history is empty")
    scale = max(1.0, abs(history.times[0]))
    for tm, fld in zip(history.times, history.fields):
        if abs(t_query - tm) < 1e-12 * scale:
            return StreamVelocity(fld)
    ws = _lagrange_weights(history.times, t_query)
    combined = history.fields[0].combine(history.fields[1:], ws)
    return StreamVelocity(combined)


def rk3_backward_feet(stages, x, v, dt: float):
    """One backward RK3 solve of the characteristic ODE for a batch of points.

    ``stages`` are velocity evaluators at times (t+dt, t+dt/2, t); the
    tableau is the classical third-order one (stages 0, 1/2, 1 with weights
    1/6, 2/3, 1/6) applied with step -dt.
    """
    h = -dt
    u1a, u2a = stages[0].velocity(x, v)
    x1 = x + 0.5 * h * u1a
    v1 = v + 0.5 * h * u2a
    u1b, u2b = stages[1].velocity(x1, v1)
    x2 = x + h * (2.0 * u1b - u1a)
    v2 = v + h * (2.0 * u2b - u2a)
    u1c, u2c = stages[2].velocity(x2, v2)
    sixth = h / 6.0
    fx = x + sixth * (u1a + 4.0 * u1b + u1c)
    fv = v + sixth * (u2a + 4.0 * u2b + u2c)
    return fx, fv


def advect_map_step(bmap: BackwardMap, stages, dt: float,
                    stencil_eps: float) -> BackwardMap:
    """Advance the map one step backward-in-time through the velocity stages.

    Five points per grid node are integrated backward to their feet and the
    current map is interpolated there: the node itself carries the new map
    value (an eps-stencil average would add an O(eps^2) bias per step that
    accumulates as eps^2 * T/dt and caps temporal convergence), while the
    4 corners at (x +- eps, v +- eps) provide the derivative jet, corrected
    for the displacement-from-identity convention.
    """
    if dt <= 0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    if stencil_eps <= 0:
        raise ConfigurationError(f"stencil distance must be positive, got {stencil_eps}")
    g = bmap.grid
    Xm, Vm = g.meshes()
    xn = Xm.ravel()
    vn = Vm.ravel()

    def feet_through_map(px, pv, label):
        fx, fv = rk3_backward_feet(stages, px, pv, dt)
        bad = ~(np.isfinite(fx) & np.isfinite(fv))
        if bad.any():
            flat = int(np.argmax(bad))
            i, j = divmod(flat, g.Nv)
            raise BlowUpError(
                f"non-finite foot point at node ({i}, {j}) = "
                f"({g.x[i]:.6g}, {g.v[j]:.6g}), {label}, "
                f"t in [{bmap.t_end:.6g}, {bmap.t_end + dt:.6g}]"
            )
        return map_apply(bmap, fx, fv)

    node_x, node_v = feet_through_map(xn, vn, "node center")
    mapped = {}
    for sx, sv in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        mapped[(sx, sv)] = feet_through_map(
            xn + sx * stencil_eps, vn + sv * stencil_eps,
            f"corner ({sx:+d}, {sv:+d})",
        )

    shape = (g.Nx, g.Nv)
    new_fields = []
    for comp, node_val in ((0, node_x), (1, node_v)):
        _, ddx, ddv, ddxv = jet_from_stencil(
            mapped[(1, 1)][comp], mapped[(1, -1)][comp],
            mapped[(-1, 1)][comp], mapped[(-1, -1)][comp],
            stencil_eps,
        )
        new_fields.append([a.reshape(shape) for a in (node_val, ddx, ddv, ddxv)])

    (xval, xdx, xdv, xdxv), (vval, vdx, vdv, vdxv) = new_fields
    disp_x = HermiteField2D(g, xval - Xm, xdx - 1.0, xdv, xdxv)
    disp_v = HermiteField2D(g, vval - Vm, vdx, vdv - 1.0, vdxv)
    return BackwardMap(disp_x, disp_v, bmap.t_start, bmap.t_end + dt)


def jacobian_det_error(bmap: BackwardMap) -> float:
    """Node-wise max of |det(grad map) - 1| from the stored jet data."""
    det = (
        (1.0 + bmap.disp_x.fx) * (1.0 + bmap.disp_v.fv)
        - bmap.disp_x.fv * bmap.disp_v.fx
    )
    return float(np.abs(det - 1.0).max())


class SubmapStack:
    """Active map plus chronologically archived submaps.

    The composition of all stored maps (earliest last) with the active map
    realizes the global backward map.
    """

    def __init__(self, active: BackwardMap, max_submaps: int = 512):
        self.active = active
        self.stored: list[BackwardMap] = []
        self.max_submaps = max_submaps

    @property
    def n_submaps(self) -> int:
        return len(self.stored)

    def remap_if_needed(self, delta_det: float) -> tuple[bool, float]:
        """Archive the active map and restart from identity if e_det > delta."""
        if delta_det <= 0:
            raise ConfigurationError(f"delta_det must be positive, got {delta_det}")
        e_det = jacobian_det_error(self.active)
        if e_det <= delta_det:
            return False, e_det
        if len(self.stored) + 1 > self.max_submaps:
            raise StateError(
                f"submap stack exceeded its cap of {self.max_submaps}; "
                "raise max_submaps or loosen delta_det"
            )
        self.stored.append(self.active)
        self.active = identity_map(self.active.grid, self.active.t_end)
        return True, e_det


def eval_composed(stack: SubmapStack, x, v):
    """Apply the active map, then each archived submap, latest first."""
    X, V = map_apply(stack.active, x, v)
    for sub in reversed(stack.stored):
        X, V = map_apply(sub, X, V)
    return X, V


def sample_pdf(stack: SubmapStack, f0, x, v):
    """Initial condition composed with the backward map at the query points."""
    X, V = eval_composed(stack, x, v)
    dom = stack.active.grid.domain
    X = X - dom.Lx * np.floor(X / dom.Lx)
    V = (V + dom.Lv) - 2.0 * dom.Lv * np.floor((V + dom.Lv) / (2.0 * dom.Lv)) - dom.Lv
    return f0(X, V)


def zoom_eval(stack: SubmapStack, f0, window, resolution):
    """Sample the solution on a uniform grid over an arbitrary window.

    ``window`` is (x_min, x_max, v_min, v_max); ``resolution`` is the point
    count per direction (int or pair).  The grid is half-open like the main
    grids, so a full-domain window reproduces grid sampling exactly.
    """
    x_min, x_max, v_min, v_max = window
    if not (x_max > x_min and v_max > v_min):
        raise ConfigurationError(f"degenerate zoom window {window}")
    nx, nv = (resolution, resolution) if np.isscalar(resolution) else resolution
    if nx < 1 or nv < 1:
        raise ConfigurationError(f"zoom resolution must be positive, got {resolution}")
    xs = x_min + (x_max - x_min) * np.arange(nx) / nx
    vs = v_min + (v_max - v_min) * np.arange(nv) / nv
    Xq, Vq = np.meshgrid(xs, vs, indexing="ij")
    return sample_pdf(stack, f0, Xq, Vq)
