"""Hot inner loop of the one-sided J-Jacobi sweep.

One implementation serves both execution paths: ``sweep_pairs_jit`` is the
numba-compiled version, ``sweep_pairs_py`` the interpreted pure-numpy one
(column updates are whole-array expressions, so the fallback still runs at
BLAS-1 speed).  ``sweep_pairs`` is the path selected at import time via
HJACOBI_NO_NUMBA.

Rotation conventions (cs, sn, t real; phase unit-modulus):

* trigonometric pair (equal J signs):  new_r = cs*f - sn*g_s,
  new_s = sn*f + cs*g_s, with f = phase*g_r, cs^2 + sn^2 = 1;
* hyperbolic pair (opposite J signs):  new_r = cs*f + sn*g_s,
  new_s = sn*f + cs*g_s, with cs^2 - sn^2 = 1 (cs = cosh, sn = sinh).

Both choices make the 2x2 transformation J-unitary for the pivot's sign pair
and annihilate the off-diagonal Gram entry; the minimal-|t| root is taken.
"""

import numpy as np

from ._accel import HAVE_NUMBA, NUMBA_ENABLED, jit_kernel


def _sweep_pairs(G, signs, D, W, n_i, n_j, diag_bl, orth_tol, quad_tol):
    """Run one annihilation pass over column pairs of G.

    diag_bl=True: visit all pairs (r, s), r < s < n_i, column-cyclically.
    diag_bl=False: visit the cross pairs r < n_i <= s < n_i + n_j.

    G and W are updated in place (W may have zero rows to skip accumulation);
    D caches the Gram diagonal and is updated incrementally.

    Returns (rotations, big_rotations, max_abs_t, fail_r, fail_s); the fail
    indices are -1 on success, or the pair at which a non-positive-definite
    pivot was detected (the pass stops there).
    """
    nrot = 0
    nbig = 0
    max_t = 0.0
    if diag_bl:
        s_lo = 1
        s_hi = n_i
    else:
        s_lo = n_i
        s_hi = n_i + n_j
    for s in range(s_lo, s_hi):
        if diag_bl:
            r_hi = s
        else:
            r_hi = n_i
        for r in range(r_hi):
            a = np.vdot(G[:, r], G[:, s])
            d_rr = D[r]
            d_ss = D[s]
            aa = abs(a)
            if aa <= orth_tol * np.sqrt(d_rr * d_ss):
                continue
            if aa * aa >= d_rr * d_ss:
                return nrot, nbig, max_t, r, s
            eta = aa if a.real >= 0.0 else -aa
            phase = a / eta
            if signs[r] == signs[s]:
                hyp = -1.0
                theta = (d_ss - d_rr) / (2.0 * eta)
                sg = 1.0 if theta >= 0.0 else -1.0
                t = sg / (abs(theta) + np.sqrt(theta * theta + 1.0))
                h = np.sqrt(1.0 - t * t * hyp)
            else:
                hyp = 1.0
                theta = -(d_rr + d_ss) / (2.0 * eta)
                disc = theta * theta - 1.0
                if disc <= 0.0:
                    return nrot, nbig, max_t, r, s
                sg = 1.0 if theta >= 0.0 else -1.0
                t = sg / (abs(theta) + np.sqrt(disc))
                h = np.sqrt(1.0 - t * t)
            cs = 1.0 / h
            sn = cs * t
            D[r] = d_rr + hyp * t * eta
            D[s] = d_ss + t * eta
            f = phase * G[:, r]
            new_r = cs * f + (hyp * sn) * G[:, s]
            new_s = sn * f + cs * G[:, s]
            G[:, r] = new_r
            G[:, s] = new_s
            if W.shape[0] > 0:
                fw = phase * W[:, r]
                new_wr = cs * fw + (hyp * sn) * W[:, s]
                new_ws = sn * fw + cs * W[:, s]
                W[:, r] = new_wr
                W[:, s] = new_ws
            nrot += 1
            at = abs(t)
            if at > max_t:
                max_t = at
            if at > quad_tol:
                nbig += 1
    return nrot, nbig, max_t, -1, -1


sweep_pairs_py = _sweep_pairs
sweep_pairs_jit = jit_kernel(_sweep_pairs) if HAVE_NUMBA else None
sweep_pairs = sweep_pairs_jit if NUMBA_ENABLED else sweep_pairs_py
