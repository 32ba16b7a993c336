# Compiled twins of kernels/pure.py: MUSCL sweeps and the Helmholtz stencil.
# Semantics must match the numpy backend; tests cross-check the two.

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

LIM_NONE = 0
LIM_MINMOD = 1
LIM_VANLEER = 2
LIM_MC = 3


cdef inline double _slope(double a, double b, int lim) nogil:
    cdef double m
    if lim == 0:
        return 0.5 * (a + b)
    if a * b <= 0.0:
        return 0.0
    if lim == 1:
        if a > 0.0:
            return a if a < b else b
        return a if a > b else b
    if lim == 2:
        return 2.0 * a * b / (a + b)
    # monotonized central
    m = 0.5 * fabs(a + b)
    if 2.0 * fabs(a) < m:
        m = 2.0 * fabs(a)
    if 2.0 * fabs(b) < m:
        m = 2.0 * fabs(b)
    return m if a > 0.0 else -m


def muscl_sweep_x(double[:, :, ::1] q, double[:, ::1] P, double[:, ::1] fx,
                  double dt, double dx, int ng, int limiter_id, bint update_P):
    cdef Py_ssize_t ncomp = q.shape[0]
    cdef Py_ssize_t NX = q.shape[1], NZ = q.shape[2]
    cdef Py_ssize_t I = NX - 2 * ng, K = NZ - 2 * ng
    cdef Py_ssize_t i, j, k, c, iL, kk
    cdef double f, cour, a, b, s, psif, lam = dt / dx
    cdef double maxC = 0.0

    scratch = np.empty((ncomp + 2, NX))
    cdef double[:, ::1] row = scratch          # psi rows + inverse P row
    flux_np = np.empty((ncomp, I + 1))
    cdef double[:, ::1] flux = flux_np

    with nogil:
        for k in range(K):
            kk = ng + k
            for i in range(NX):
                row[ncomp, i] = 1.0 / P[i, kk]
            for c in range(ncomp):
                for i in range(NX):
                    row[c, i] = q[c, i, kk] * row[ncomp, i]
            for j in range(I + 1):
                iL = ng - 1 + j
                f = fx[j, k]
                cour = lam * f / (0.5 * (P[iL, kk] + P[iL + 1, kk]))
                if fabs(cour) > maxC:
                    maxC = fabs(cour)
                for c in range(ncomp):
                    if f >= 0.0:
                        a = (row[c, iL] - row[c, iL - 1]) / dx
                        b = (row[c, iL + 1] - row[c, iL]) / dx
                        s = _slope(a, b, limiter_id)
                        psif = row[c, iL] + (0.5 * dx) * (1.0 - cour) * s
                    else:
                        a = (row[c, iL + 1] - row[c, iL]) / dx
                        b = (row[c, iL + 2] - row[c, iL + 1]) / dx
                        s = _slope(a, b, limiter_id)
                        psif = row[c, iL + 1] - (0.5 * dx) * (1.0 + cour) * s
                    flux[c, j] = f * psif
            for i in range(I):
                for c in range(ncomp):
                    q[c, ng + i, kk] -= lam * (flux[c, i + 1] - flux[c, i])
                if update_P:
                    P[ng + i, kk] -= lam * (fx[i + 1, k] - fx[i, k])
    return maxC


def muscl_sweep_z(double[:, :, ::1] q, double[:, ::1] P, double[:, ::1] fz,
                  double dt, double dz, int ng, int limiter_id, bint update_P):
    cdef Py_ssize_t ncomp = q.shape[0]
    cdef Py_ssize_t NX = q.shape[1], NZ = q.shape[2]
    cdef Py_ssize_t I = NX - 2 * ng, K = NZ - 2 * ng
    cdef Py_ssize_t i, m, k, c, kL, ii
    cdef double f, cour, a, b, s, psif, lam = dt / dz
    cdef double maxC = 0.0

    scratch = np.empty((ncomp + 2, NZ))
    cdef double[:, ::1] col = scratch
    flux_np = np.empty((ncomp, K + 1))
    cdef double[:, ::1] flux = flux_np

    with nogil:
        for i in range(I):
            ii = ng + i
            for k in range(NZ):
                col[ncomp, k] = 1.0 / P[ii, k]
            for c in range(ncomp):
                for k in range(NZ):
                    col[c, k] = q[c, ii, k] * col[ncomp, k]
            for m in range(K + 1):
                kL = ng - 1 + m
                f = fz[i, m]
                cour = lam * f / (0.5 * (P[ii, kL] + P[ii, kL + 1]))
                if fabs(cour) > maxC:
                    maxC = fabs(cour)
                for c in range(ncomp):
                    if f >= 0.0:
                        a = (col[c, kL] - col[c, kL - 1]) / dz
                        b = (col[c, kL + 1] - col[c, kL]) / dz
                        s = _slope(a, b, limiter_id)
                        psif = col[c, kL] + (0.5 * dz) * (1.0 - cour) * s
                    else:
                        a = (col[c, kL + 1] - col[c, kL]) / dz
                        b = (col[c, kL + 2] - col[c, kL + 1]) / dz
                        s = _slope(a, b, limiter_id)
                        psif = col[c, kL + 1] - (0.5 * dz) * (1.0 + cour) * s
                    flux[c, m] = f * psif
            for k in range(K):
                for c in range(ncomp):
                    q[c, ii, ng + k] -= lam * (flux[c, k + 1] - flux[c, k])
                if update_P:
                    P[ii, ng + k] -= lam * (fz[i, k + 1] - fz[i, k])
    return maxC


def helmholtz_apply(double[:, ::1] pi, double[:, ::1] diag,
                    double[:, ::1] hx, double[:, ::1] hz,
                    double dx, double dz):
    cdef Py_ssize_t I = pi.shape[0], Kp1 = pi.shape[1]
    cdef Py_ssize_t K = Kp1 - 1
    cdef Py_ssize_t n, m, np1, nm1
    cdef double uh, uhm, whp, whm

    u_np = np.empty((I, K))
    w_np = np.empty((I, K))
    out_np = np.empty((I, Kp1))
    cdef double[:, ::1] u = u_np
    cdef double[:, ::1] w = w_np
    cdef double[:, ::1] out = out_np

    with nogil:
        for n in range(I):
            np1 = n + 1 if n + 1 < I else 0
            for m in range(K):
                u[n, m] = hx[n, m] * ((pi[np1, m] + pi[np1, m + 1])
                                      - (pi[n, m] + pi[n, m + 1])) / (2.0 * dx)
                w[n, m] = hz[n, m] * ((pi[n, m + 1] + pi[np1, m + 1])
                                      - (pi[n, m] + pi[np1, m])) / (2.0 * dz)
        for n in range(I):
            nm1 = n - 1 if n > 0 else I - 1
            for m in range(Kp1):
                if m == 0:
                    uh = u[n, 0]
                    uhm = u[nm1, 0]
                elif m == K:
                    uh = u[n, K - 1]
                    uhm = u[nm1, K - 1]
                else:
                    uh = 0.5 * (u[n, m - 1] + u[n, m])
                    uhm = 0.5 * (u[nm1, m - 1] + u[nm1, m])
                if m == 0:
                    whp = 0.5 * (w[nm1, 0] + w[n, 0])
                    out[n, m] = diag[n, m] * pi[n, m] - ((uh - uhm) / dx + 2.0 * whp / dz)
                elif m == K:
                    whm = 0.5 * (w[nm1, K - 1] + w[n, K - 1])
                    out[n, m] = diag[n, m] * pi[n, m] - ((uh - uhm) / dx - 2.0 * whm / dz)
                else:
                    whp = 0.5 * (w[nm1, m] + w[n, m])
                    whm = 0.5 * (w[nm1, m - 1] + w[n, m - 1])
                    out[n, m] = diag[n, m] * pi[n, m] - ((uh - uhm) / dx + (whp - whm) / dz)
    return out_np
