# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled SMO solver for the epsilon-SVR dual.

Same algorithm and stopping rule as :mod:`tsxplain._smo_py`; the inner
selection/update loops are plain C over typed memoryviews, which is what
makes grid search over many candidates fast.
"""

import numpy as np

from libc.math cimport INFINITY


def smo_solve(K, y, double C, double epsilon, double tol, long max_iter):
    """Run SMO until the KKT violation gap drops to ``tol``.

    Returns ``(z, gap, iterations, converged)``; see the pure-Python twin
    for the problem statement.
    """
    cdef const double[:, ::1] Km = np.ascontiguousarray(K, dtype=np.float64)
    cdef const double[::1] ym = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = Km.shape[0]
    cdef Py_ssize_t two_n = 2 * n

    z_arr = np.zeros(two_n)
    G_arr = np.empty(two_n)
    cdef double[::1] z = z_arr
    cdef double[::1] G = G_arr

    cdef Py_ssize_t s, it, i, j, ii, jj
    cdef double val, m_up, m_low, gap, kappa, lam, room_i, room_j, d
    cdef bint up_ok, low_ok

    for s in range(n):
        G[s] = epsilon - ym[s]
        G[n + s] = epsilon + ym[s]

    gap = INFINITY
    for it in range(max_iter):
        m_up = -INFINITY
        m_low = INFINITY
        i = -1
        j = -1
        for s in range(two_n):
            if s < n:
                val = -G[s]
                up_ok = z[s] < C
                low_ok = z[s] > 0.0
            else:
                val = G[s]
                up_ok = z[s] > 0.0
                low_ok = z[s] < C
            if up_ok and val > m_up:
                m_up = val
                i = s
            if low_ok and val < m_low:
                m_low = val
                j = s

        gap = m_up - m_low
        if gap <= tol:
            if gap < 0.0:
                gap = 0.0
            return z_arr, gap, it, True

        ii = i % n
        jj = j % n
        kappa = Km[ii, ii] + Km[jj, jj] - 2.0 * Km[ii, jj]
        if kappa > 1e-12:
            lam = gap / kappa
        else:
            lam = INFINITY

        room_i = (C - z[i]) if i < n else z[i]
        room_j = z[j] if j < n else (C - z[j])
        if room_i < lam:
            lam = room_i
        if room_j < lam:
            lam = room_j

        if lam >= room_i:
            z[i] = C if i < n else 0.0
        else:
            z[i] += lam if i < n else -lam
        if lam >= room_j:
            z[j] = 0.0 if j < n else C
        else:
            z[j] -= lam if j < n else -lam

        for s in range(n):
            d = lam * (Km[s, ii] - Km[s, jj])
            G[s] += d
            G[n + s] -= d

    return z_arr, gap, max_iter, False
