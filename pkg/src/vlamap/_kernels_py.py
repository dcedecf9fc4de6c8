"""Pure-NumPy evaluation kernels.

Fallback backend with the same call surface as the compiled extension
``vlamap._kernels``; see ``vlamap.backend`` for how one of the two is
selected at import time.  All fields are doubly periodic: queries are
wrapped into the fundamental box by floor reduction, and queries landing
within ``SNAP`` of a cell edge are snapped onto the node so that nodal
evaluation is bit-exact.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"

# Cell-relative snap distance; 1e-9 of a cell is far below any physical
# scale handled here but well above accumulated rounding in coordinates.
SNAP = 1e-9


def _locate(q, origin, h, n):
    s = (np.asarray(q, dtype=np.float64) - origin) / h
    i = np.floor(s)
    t = s - i
    hi = t > 1.0 - SNAP
    i = np.where(hi, i + 1.0, i)
    t = np.where(hi | (t < SNAP), 0.0, t)
    idx = i.astype(np.int64) % n
    return idx, t


def _basis(t):
    t2 = t * t
    t3 = t2 * t
    a0 = 2.0 * t3 - 3.0 * t2 + 1.0
    a1 = -2.0 * t3 + 3.0 * t2
    b0 = t3 - 2.0 * t2 + t
    b1 = t3 - t2
    return a0, a1, b0, b1


def _dbasis(t):
    t2 = t * t
    da0 = 6.0 * t2 - 6.0 * t
    da1 = -da0
    db0 = 3.0 * t2 - 4.0 * t + 1.0
    db1 = 3.0 * t2 - 2.0 * t
    return da0, da1, db0, db1


def bicubic_eval(val, fx, fv, fxv, x0, v0, hx, hv, xq, vq):
    """Evaluate a periodic bicubic Hermite field at query points."""
    nx, nv = val.shape
    i0, tx = _locate(xq, x0, hx, nx)
    j0, tv = _locate(vq, v0, hv, nv)
    i1 = (i0 + 1) % nx
    j1 = (j0 + 1) % nv

    ax0, ax1, bx0, bx1 = _basis(tx)
    av0, av1, bv0, bv1 = _basis(tv)
    bx0 = bx0 * hx
    bx1 = bx1 * hx
    bv0 = bv0 * hv
    bv1 = bv1 * hv

    out = (
        val[i0, j0] * ax0 * av0 + val[i1, j0] * ax1 * av0
        + val[i0, j1] * ax0 * av1 + val[i1, j1] * ax1 * av1
        + fx[i0, j0] * bx0 * av0 + fx[i1, j0] * bx1 * av0
        + fx[i0, j1] * bx0 * av1 + fx[i1, j1] * bx1 * av1
        + fv[i0, j0] * ax0 * bv0 + fv[i1, j0] * ax1 * bv0
        + fv[i0, j1] * ax0 * bv1 + fv[i1, j1] * ax1 * bv1
        + fxv[i0, j0] * bx0 * bv0 + fxv[i1, j0] * bx1 * bv0
        + fxv[i0, j1] * bx0 * bv1 + fxv[i1, j1] * bx1 * bv1
    )
    return out


def bicubic_eval_grad(val, fx, fv, fxv, x0, v0, hx, hv, xq, vq):
    """Evaluate field value and its analytic gradient at query points."""
    nx, nv = val.shape
    i0, tx = _locate(xq, x0, hx, nx)
    j0, tv = _locate(vq, v0, hv, nv)
    i1 = (i0 + 1) % nx
    j1 = (j0 + 1) % nv

    ax0, ax1, bx0, bx1 = _basis(tx)
    av0, av1, bv0, bv1 = _basis(tv)
    dax0, dax1, dbx0, dbx1 = _dbasis(tx)
    dav0, dav1, dbv0, dbv1 = _dbasis(tv)

    # Scale so that B-terms carry h and derivative terms carry 1/h once.
    bx0 = bx0 * hx
    bx1 = bx1 * hx
    bv0 = bv0 * hv
    bv1 = bv1 * hv
    dax0 = dax0 / hx
    dax1 = dax1 / hx
    dav0 = dav0 / hv
    dav1 = dav1 / hv
    # d/dx of (b * hx) is just b', so dbx/dbv stay unscaled.

    c00 = val[i0, j0]
    c10 = val[i1, j0]
    c01 = val[i0, j1]
    c11 = val[i1, j1]
    x00 = fx[i0, j0]
    x10 = fx[i1, j0]
    x01 = fx[i0, j1]
    x11 = fx[i1, j1]
    v00 = fv[i0, j0]
    v10 = fv[i1, j0]
    v01 = fv[i0, j1]
    v11 = fv[i1, j1]
    m00 = fxv[i0, j0]
    m10 = fxv[i1, j0]
    m01 = fxv[i0, j1]
    m11 = fxv[i1, j1]

    out = (
        c00 * ax0 * av0 + c10 * ax1 * av0 + c01 * ax0 * av1 + c11 * ax1 * av1
        + x00 * bx0 * av0 + x10 * bx1 * av0 + x01 * bx0 * av1 + x11 * bx1 * av1
        + v00 * ax0 * bv0 + v10 * ax1 * bv0 + v01 * ax0 * bv1 + v11 * ax1 * bv1
        + m00 * bx0 * bv0 + m10 * bx1 * bv0 + m01 * bx0 * bv1 + m11 * bx1 * bv1
    )
    gx = (
        c00 * dax0 * av0 + c10 * dax1 * av0 + c01 * dax0 * av1 + c11 * dax1 * av1
        + x00 * dbx0 * av0 + x10 * dbx1 * av0 + x01 * dbx0 * av1 + x11 * dbx1 * av1
        + v00 * dax0 * bv0 + v10 * dax1 * bv0 + v01 * dax0 * bv1 + v11 * dax1 * bv1
        + m00 * dbx0 * bv0 + m10 * dbx1 * bv0 + m01 * dbx0 * bv1 + m11 * dbx1 * bv1
    )
    gv = (
        c00 * ax0 * dav0 + c10 * ax1 * dav0 + c01 * ax0 * dav1 + c11 * ax1 * dav1
        + x00 * bx0 * dav0 + x10 * bx1 * dav0 + x01 * bx0 * dav1 + x11 * bx1 * dav1
        + v00 * ax0 * dbv0 + v10 * ax1 * dbv0 + v01 * ax0 * dbv1 + v11 * ax1 * dbv1
        + m00 * bx0 * dbv0 + m10 * bx1 * dbv0 + m01 * bx0 * dbv1 + m11 * bx1 * dbv1
    )
    return out, gx, gv


def stream_velocity_batch(val, fx, fv, fxv, x0, v0, hx, hv, xq, vq):
    """(u1, u2) = (d/dv, -d/dx) of the interpolant at the query points."""
    _, gx, gv = bicubic_eval_grad(val, fx, fv, fxv, x0, v0, hx, hv, xq, vq)
    return gv, -gx


def map_apply_batch(af, afx, afv, afxv, bf, bfx, bfv, bfxv,
                    x0, v0, hx, hv, xq, vq):
    """Query points plus both interpolated displacement components."""
    X = xq + bicubic_eval(af, afx, afv, afxv, x0, v0, hx, hv, xq, vq)
    V = vq + bicubic_eval(bf, bfx, bfv, bfxv, x0, v0, hx, hv, xq, vq)
    return X, V
