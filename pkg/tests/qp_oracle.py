"""Independent dense QP oracle for checking the SMO solver.

Solves  min 1/2 z'Qz + p'z  over the box [0, C] intersected with the
hyperplane q'z = 0 using accelerated projected gradient descent, then
polishes the solution with an active-set KKT solve.  No code is shared
with the production solver: the projection, the iteration, and the
stopping logic are all different machinery.
"""

import numpy as np


def project_box_hyperplane(v, C, q):
    """Euclidean projection onto {0 <= z <= C, q'z = 0} by bisection."""
    bound = np.abs(v).max() + C + 1.0
    lo, hi = -bound, bound
    for _ in range(200):
        nu = 0.5 * (lo + hi)
        if q @ np.clip(v - nu * q, 0.0, C) > 0.0:
            lo = nu
        else:
            hi = nu
    return np.clip(v - 0.5 * (lo + hi) * q, 0.0, C)


def kkt_gap(z, grad, C, q, cut=1e-10):
    """Maximal violating-pair gap; <= 0 means the KKT conditions hold."""
    sel = -q * grad
    up = np.where(q > 0, z < C - cut, z > cut)
    low = np.where(q > 0, z > cut, z < C - cut)
    m = sel[up].max() if up.any() else -np.inf
    M = sel[low].min() if low.any() else np.inf
    return m - M


def solve_box_eq_qp(Q, p, C, fista_iters=4000, polish_rounds=60):
    """Return (z, objective, kkt_gap) at the polished optimum."""
    m = Q.shape[0]
    q = np.ones(m)
    q[m // 2:] = -1.0

    L = max(float(np.linalg.eigvalsh(Q).max()), 1e-10)
    z = project_box_hyperplane(np.zeros(m), C, q)
    w = z.copy()
    t = 1.0
    for _ in range(fista_iters):
        grad = Q @ w + p
        z_new = project_box_hyperplane(w - grad / L, C, q)
        t_new = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        w = z_new + ((t - 1.0) / t_new) * (z_new - z)
        z, t = z_new, t_new

    def objective(zz):
        return float(0.5 * zz @ Q @ zz + p @ zz)

    def gap(zz):
        return kkt_gap(zz, Q @ zz + p, C, q)

    # active-set polish: fix variables at their bounds, solve the KKT
    # system of the equality-constrained QP on the free set exactly
    kappa = 1e-9 * max(1.0, C)
    for _ in range(polish_rounds):
        at_zero = z <= kappa
        at_cap = z >= C - kappa
        free = ~(at_zero | at_cap)
        if not free.any():
            break
        nf = int(free.sum())
        fixed_cap = np.full(int(at_cap.sum()), C)
        kkt = np.zeros((nf + 1, nf + 1))
        kkt[:nf, :nf] = Q[np.ix_(free, free)] + 1e-12 * np.eye(nf)
        kkt[:nf, nf] = q[free]
        kkt[nf, :nf] = q[free]
        rhs = np.zeros(nf + 1)
        rhs[:nf] = -(p[free] + Q[np.ix_(free, at_cap)] @ fixed_cap)
        rhs[nf] = -q[at_cap] @ fixed_cap
        sol = np.linalg.lstsq(kkt, rhs, rcond=None)[0]

        z_new = z.copy()
        z_new[at_zero] = 0.0
        z_new[at_cap] = C
        z_new[free] = np.clip(sol[:nf], 0.0, C)
        if abs(q @ z_new) < 1e-9 and gap(z_new) < gap(z):
            z = z_new
        else:
            break

    return z, objective(z), gap(z)


def svr_dual_matrices(K, y, epsilon):
    """Stack the n-point kernel problem into its 2n-variable dense form."""
    Q = np.block([[K, -K], [-K, K]])
    p = np.concatenate((epsilon - y, epsilon + y))
    return Q, p


def svr_dual_objective(K, y, epsilon, z):
    """Dual value (maximize form) of stacked variables z."""
    n = K.shape[0]
    beta = z[:n] - z[n:]
    return float(-0.5 * beta @ K @ beta - epsilon * z.sum() + y @ beta)
