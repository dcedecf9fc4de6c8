# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled evaluation kernels.

Mirrors ``vlamap._kernels_py`` exactly: periodic bicubic Hermite evaluation
with floor wrapping and node snapping.  Kept free of Python objects inside
the point loops; loops run parallel over points with a static schedule, so
results do not depend on the thread count.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel import prange
from libc.math cimport floor

cnp.import_array()

BACKEND = "cython"

cdef double SNAP = 1e-9


cdef inline Py_ssize_t _locate(double q, double origin, double h, Py_ssize_t n,
                               double* t) nogil:
    cdef double s = (q - origin) / h
    cdef double fi = floor(s)
    cdef double tt = s - fi
    if tt > 1.0 - SNAP:
        fi += 1.0
        tt = 0.0
    elif tt < SNAP:
        tt = 0.0
    cdef Py_ssize_t i = (<Py_ssize_t> fi) % n
    if i < 0:
        i += n
    t[0] = tt
    return i


def bicubic_eval(double[:, ::1] val, double[:, ::1] fx, double[:, ::1] fv,
                 double[:, ::1] fxv, double x0, double v0, double hx, double hv,
                 double[::1] xq, double[::1] vq):
    cdef Py_ssize_t nx = val.shape[0]
    cdef Py_ssize_t nv = val.shape[1]
    cdef Py_ssize_t npts = xq.shape[0]
    out_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr

    cdef Py_ssize_t p, i0, i1, j0, j1
    cdef double tx, tv, t2, t3
    cdef double ax0, ax1, bx0, bx1, av0, av1, bv0, bv1

    for p in prange(npts, nogil=True, schedule="static"):
        i0 = _locate(xq[p], x0, hx, nx, &tx)
        j0 = _locate(vq[p], v0, hv, nv, &tv)
        i1 = i0 + 1
        if i1 == nx:
            i1 = 0
        j1 = j0 + 1
        if j1 == nv:
            j1 = 0

        t2 = tx * tx
        t3 = t2 * tx
        ax0 = 2.0 * t3 - 3.0 * t2 + 1.0
        ax1 = -2.0 * t3 + 3.0 * t2
        bx0 = (t3 - 2.0 * t2 + tx) * hx
        bx1 = (t3 - t2) * hx

        t2 = tv * tv
        t3 = t2 * tv
        av0 = 2.0 * t3 - 3.0 * t2 + 1.0
        av1 = -2.0 * t3 + 3.0 * t2
        bv0 = (t3 - 2.0 * t2 + tv) * hv
        bv1 = (t3 - t2) * hv

        out[p] = (
            val[i0, j0] * ax0 * av0 + val[i1, j0] * ax1 * av0
            + val[i0, j1] * ax0 * av1 + val[i1, j1] * ax1 * av1
            + fx[i0, j0] * bx0 * av0 + fx[i1, j0] * bx1 * av0
            + fx[i0, j1] * bx0 * av1 + fx[i1, j1] * bx1 * av1
            + fv[i0, j0] * ax0 * bv0 + fv[i1, j0] * ax1 * bv0
            + fv[i0, j1] * ax0 * bv1 + fv[i1, j1] * ax1 * bv1
            + fxv[i0, j0] * bx0 * bv0 + fxv[i1, j0] * bx1 * bv0
            + fxv[i0, j1] * bx0 * bv1 + fxv[i1, j1] * bx1 * bv1
        )
    return out_arr


def bicubic_eval_grad(double[:, ::1] val, double[:, ::1] fx, double[:, ::1] fv,
                      double[:, ::1] fxv, double x0, double v0, double hx,
                      double hv, double[::1] xq, double[::1] vq):
    cdef Py_ssize_t nx = val.shape[0]
    cdef Py_ssize_t nv = val.shape[1]
    cdef Py_ssize_t npts = xq.shape[0]
    out_arr = np.empty(npts, dtype=np.float64)
    gx_arr = np.empty(npts, dtype=np.float64)
    gv_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double[::1] gx = gx_arr
    cdef double[::1] gv = gv_arr

    cdef Py_ssize_t p, i0, i1, j0, j1
    cdef double tx, tv, t2, t3
    cdef double ax0, ax1, bx0, bx1, av0, av1, bv0, bv1
    cdef double dax0, dax1, dbx0, dbx1, dav0, dav1, dbv0, dbv1
    cdef double c00, c10, c01, c11, x00, x10, x01, x11
    cdef double v00, v10, v01, v11, m00, m10, m01, m11

    for p in prange(npts, nogil=True, schedule="static"):
        i0 = _locate(xq[p], x0, hx, nx, &tx)
        j0 = _locate(vq[p], v0, hv, nv, &tv)
        i1 = i0 + 1
        if i1 == nx:
            i1 = 0
        j1 = j0 + 1
        if j1 == nv:
            j1 = 0

        t2 = tx * tx
        t3 = t2 * tx
        ax0 = 2.0 * t3 - 3.0 * t2 + 1.0
        ax1 = -2.0 * t3 + 3.0 * t2
        bx0 = (t3 - 2.0 * t2 + tx) * hx
        bx1 = (t3 - t2) * hx
        dax0 = (6.0 * t2 - 6.0 * tx) / hx
        dax1 = -dax0
        dbx0 = 3.0 * t2 - 4.0 * tx + 1.0
        dbx1 = 3.0 * t2 - 2.0 * tx

        t2 = tv * tv
        t3 = t2 * tv
        av0 = 2.0 * t3 - 3.0 * t2 + 1.0
        av1 = -2.0 * t3 + 3.0 * t2
        bv0 = (t3 - 2.0 * t2 + tv) * hv
        bv1 = (t3 - t2) * hv
        dav0 = (6.0 * t2 - 6.0 * tv) / hv
        dav1 = -dav0
        dbv0 = 3.0 * t2 - 4.0 * tv + 1.0
        dbv1 = 3.0 * t2 - 2.0 * tv

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

        out[p] = (
            c00 * ax0 * av0 + c10 * ax1 * av0 + c01 * ax0 * av1 + c11 * ax1 * av1
            + x00 * bx0 * av0 + x10 * bx1 * av0 + x01 * bx0 * av1 + x11 * bx1 * av1
            + v00 * ax0 * bv0 + v10 * ax1 * bv0 + v01 * ax0 * bv1 + v11 * ax1 * bv1
            + m00 * bx0 * bv0 + m10 * bx1 * bv0 + m01 * bx0 * bv1 + m11 * bx1 * bv1
        )
        gx[p] = (
            c00 * dax0 * av0 + c10 * dax1 * av0 + c01 * dax0 * av1 + c11 * dax1 * av1
            + x00 * dbx0 * av0 + x10 * dbx1 * av0 + x01 * dbx0 * av1 + x11 * dbx1 * av1
            + v00 * dax0 * bv0 + v10 * dax1 * bv0 + v01 * dax0 * bv1 + v11 * dax1 * bv1
            + m00 * dbx0 * bv0 + m10 * dbx1 * bv0 + m01 * dbx0 * bv1 + m11 * dbx1 * bv1
        )
        gv[p] = (
            c00 * ax0 * dav0 + c10 * ax1 * dav0 + c01 * ax0 * dav1 + c11 * ax1 * dav1
            + x00 * bx0 * dav0 + x10 * bx1 * dav0 + x01 * bx0 * dav1 + x11 * bx1 * dav1
            + v00 * ax0 * dbv0 + v10 * ax1 * dbv0 + v01 * ax0 * dbv1 + v11 * ax1 * dbv1
            + m00 * bx0 * dbv0 + m10 * bx1 * dbv0 + m01 * bx0 * dbv1 + m11 * bx1 * dbv1
        )
    return out_arr, gx_arr, gv_arr


def stream_velocity_batch(double[:, ::1] val, double[:, ::1] fx, double[:, ::1] fv,
                          double[:, ::1] fxv, double x0, double v0, double hx,
                          double hv, double[::1] xq, double[::1] vq):
    """(u1, u2) = (d/dv, -d/dx) of the interpolant; value never accumulated."""
    cdef Py_ssize_t nx = val.shape[0]
    cdef Py_ssize_t nv = val.shape[1]
    cdef Py_ssize_t npts = xq.shape[0]
    u1_arr = np.empty(npts, dtype=np.float64)
    u2_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] u1 = u1_arr
    cdef double[::1] u2 = u2_arr

    cdef Py_ssize_t p, i0, i1, j0, j1
    cdef double tx, tv, t2, t3
    cdef double ax0, ax1, bx0, bx1, av0, av1, bv0, bv1
    cdef double dax0, dax1, dbx0, dbx1, dav0, dav1, dbv0, dbv1
    cdef double c00, c10, c01, c11, x00, x10, x01, x11
    cdef double v00, v10, v01, v11, m00, m10, m01, m11

    for p in prange(npts, nogil=True, schedule="static"):
        i0 = _locate(xq[p], x0, hx, nx, &tx)
        j0 = _locate(vq[p], v0, hv, nv, &tv)
        i1 = i0 + 1
        if i1 == nx:
            i1 = 0
        j1 = j0 + 1
        if j1 == nv:
            j1 = 0

        t2 = tx * tx
        t3 = t2 * tx
        ax0 = 2.0 * t3 - 3.0 * t2 + 1.0
        ax1 = -2.0 * t3 + 3.0 * t2
        bx0 = (t3 - 2.0 * t2 + tx) * hx
        bx1 = (t3 - t2) * hx
        dax0 = (6.0 * t2 - 6.0 * tx) / hx
        dax1 = -dax0
        dbx0 = 3.0 * t2 - 4.0 * tx + 1.0
        dbx1 = 3.0 * t2 - 2.0 * tx

        t2 = tv * tv
        t3 = t2 * tv
        av0 = 2.0 * t3 - 3.0 * t2 + 1.0
        av1 = -2.0 * t3 + 3.0 * t2
        bv0 = (t3 - 2.0 * t2 + tv) * hv
        bv1 = (t3 - t2) * hv
        dav0 = (6.0 * t2 - 6.0 * tv) / hv
        dav1 = -dav0
        dbv0 = 3.0 * t2 - 4.0 * tv + 1.0
        dbv1 = 3.0 * t2 - 2.0 * tv

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

        u1[p] = (
            c00 * ax0 * dav0 + c10 * ax1 * dav0 + c01 * ax0 * dav1 + c11 * ax1 * dav1
            + x00 * bx0 * dav0 + x10 * bx1 * dav0 + x01 * bx0 * dav1 + x11 * bx1 * dav1
            + v00 * ax0 * dbv0 + v10 * ax1 * dbv0 + v01 * ax0 * dbv1 + v11 * ax1 * dbv1
            + m00 * bx0 * dbv0 + m10 * bx1 * dbv0 + m01 * bx0 * dbv1 + m11 * bx1 * dbv1
        )
        u2[p] = -(
            c00 * dax0 * av0 + c10 * dax1 * av0 + c01 * dax0 * av1 + c11 * dax1 * av1
            + x00 * dbx0 * av0 + x10 * dbx1 * av0 + x01 * dbx0 * av1 + x11 * dbx1 * av1
            + v00 * dax0 * bv0 + v10 * dax1 * bv0 + v01 * dax0 * bv1 + v11 * dax1 * bv1
            + m00 * dbx0 * bv0 + m10 * dbx1 * bv0 + m01 * dbx0 * bv1 + m11 * dbx1 * bv1
        )
    return u1_arr, u2_arr


def map_apply_batch(double[:, ::1] af, double[:, ::1] afx, double[:, ::1] afv,
                    double[:, ::1] afxv, double[:, ::1] bf, double[:, ::1] bfx,
                    double[:, ::1] bfv, double[:, ::1] bfxv, double x0, double v0,
                    double hx, double hv, double[::1] xq, double[::1] vq):
    """Query point plus both interpolated displacement components.

    Shares the cell location and basis between the two fields of a map.
    """
    cdef Py_ssize_t nx = af.shape[0]
    cdef Py_ssize_t nv = af.shape[1]
    cdef Py_ssize_t npts = xq.shape[0]
    X_arr = np.empty(npts, dtype=np.float64)
    V_arr = np.empty(npts, dtype=np.float64)
    cdef double[::1] X = X_arr
    cdef double[::1] V = V_arr

    cdef Py_ssize_t p, i0, i1, j0, j1
    cdef double tx, tv, t2, t3
    cdef double ax0, ax1, bx0, bx1, av0, av1, bv0, bv1
    cdef double w00, w10, w01, w11, wx00, wx10, wx01, wx11
    cdef double wv00, wv10, wv01, wv11, wm00, wm10, wm01, wm11

    for p in prange(npts, nogil=True, schedule="static"):
        i0 = _locate(xq[p], x0, hx, nx, &tx)
        j0 = _locate(vq[p], v0, hv, nv, &tv)
        i1 = i0 + 1
        if i1 == nx:
            i1 = 0
        j1 = j0 + 1
        if j1 == nv:
            j1 = 0

        t2 = tx * tx
        t3 = t2 * tx
        ax0 = 2.0 * t3 - 3.0 * t2 + 1.0
        ax1 = -2.0 * t3 + 3.0 * t2
        bx0 = (t3 - 2.0 * t2 + tx) * hx
        bx1 = (t3 - t2) * hx

        t2 = tv * tv
        t3 = t2 * tv
        av0 = 2.0 * t3 - 3.0 * t2 + 1.0
        av1 = -2.0 * t3 + 3.0 * t2
        bv0 = (t3 - 2.0 * t2 + tv) * hv
        bv1 = (t3 - t2) * hv

        # tensor weights shared by both components
        w00 = ax0 * av0
        w10 = ax1 * av0
        w01 = ax0 * av1
        w11 = ax1 * av1
        wx00 = bx0 * av0
        wx10 = bx1 * av0
        wx01 = bx0 * av1
        wx11 = bx1 * av1
        wv00 = ax0 * bv0
        wv10 = ax1 * bv0
        wv01 = ax0 * bv1
        wv11 = ax1 * bv1
        wm00 = bx0 * bv0
        wm10 = bx1 * bv0
        wm01 = bx0 * bv1
        wm11 = bx1 * bv1

        X[p] = xq[p] + (
            af[i0, j0] * w00 + af[i1, j0] * w10 + af[i0, j1] * w01 + af[i1, j1] * w11
            + afx[i0, j0] * wx00 + afx[i1, j0] * wx10 + afx[i0, j1] * wx01 + afx[i1, j1] * wx11
            + afv[i0, j0] * wv00 + afv[i1, j0] * wv10 + afv[i0, j1] * wv01 + afv[i1, j1] * wv11
            + afxv[i0, j0] * wm00 + afxv[i1, j0] * wm10 + afxv[i0, j1] * wm01 + afxv[i1, j1] * wm11
        )
        V[p] = vq[p] + (
            bf[i0, j0] * w00 + bf[i1, j0] * w10 + bf[i0, j1] * w01 + bf[i1, j1] * w11
            + bfx[i0, j0] * wx00 + bfx[i1, j0] * wx10 + bfx[i0, j1] * wx01 + bfx[i1, j1] * wx11
            + bfv[i0, j0] * wv00 + bfv[i1, j0] * wv10 + bfv[i0, j1] * wv01 + bfv[i1, j1] * wv11
            + bfxv[i0, j0] * wm00 + bfxv[i1, j0] * wm10 + bfxv[i0, j1] * wm01 + bfxv[i1, j1] * wm11
        )
    return X_arr, V_arr
