"""Pure-Python (numpy) SMO solver for the epsilon-SVR dual problem.

Reference implementation of the same algorithm as the compiled extension
``_smo_cy``; :mod:`tsxplain._solver` picks whichever is available.

The dual is posed over stacked variables z = [alpha; alpha*] (length 2n):

    minimize   1/2 z'Qz + p'z
    subject to 0 <= z <= C,  q'z = 0

with Q[s,t] = q_s q_t K[s mod n, t mod n], p = [eps - y; eps + y] and
q = [+1...; -1...].  Each step picks the maximal-violating pair and solves
the two-variable subproblem exactly, so the equality constraint is
maintained throughout and every iterate stays inside the box.
"""

import numpy as np


def smo_solve(K, y, C, epsilon, tol, max_iter):
    """Run SMO until the KKT violation gap drops to ``tol``.

    Returns ``(z, gap, iterations, converged)`` where ``z`` holds the 2n
    stacked dual variables and ``gap`` is the final maximal violation.
    """
    K = np.ascontiguousarray(K, dtype=float)
    y = np.ascontiguousarray(y, dtype=float)
    n = K.shape[0]

    z = np.zeros(2 * n)
    G = np.concatenate((epsilon - y, epsilon + y))

    sel = np.empty(2 * n)
    gap = np.inf
    for it in range(max_iter):
        # selection criterion -q_s G_s, masked by which bound each
        # variable can move away from
        np.negative(G[:n], out=sel[:n])
        sel[n:] = G[n:]

        up = np.concatenate((z[:n] < C, z[n:] > 0.0))
        low = np.concatenate((z[:n] > 0.0, z[n:] < C))

        i = int(np.argmax(np.where(up, sel, -np.inf)))
        j = int(np.argmin(np.where(low, sel, np.inf)))
        m_up = sel[i] if up[i] else -np.inf
        m_low = sel[j] if low[j] else np.inf

        gap = m_up - m_low
        if gap <= tol:
            return z, max(gap, 0.0), it, True

        ii, jj = i % n, j % n
        kappa = K[ii, ii] + K[jj, jj] - 2.0 * K[ii, jj]
        lam = gap / kappa if kappa > 1e-12 else np.inf

        room_i = (C - z[i]) if i < n else z[i]
        room_j = z[j] if j < n else (C - z[j])
        lam = min(lam, room_i, room_j)

        # z_i moves by +q_i lam, z_j by -q_j lam; assign bounds exactly
        # when the box is the binding constraint
        if lam >= room_i:
            z[i] = C if i < n else 0.0
        else:
            z[i] += lam if i < n else -lam
        if lam >= room_j:
            z[j] = 0.0 if j < n else C
        else:
            z[j] -= lam if j < n else -lam

        dcol = K[:, ii] - K[:, jj]
        G[:n] += lam * dcol
        G[n:] -= lam * dcol

    return z, gap, max_iter, False
