"""numpy implementation of the trajectory kernel."""

import math

import numpy as np


def cm_trajectory(d, ai, bi, afc, bfc, angles, uniforms, born, tail_threshold, null_eps,
                  mean_out, dn_out, p_out, outcome_out):
    """Apply one conditional measurement per entry of ``angles`` to ``d`` in place.

    ``afc``/``bfc`` hold the conjugated amplitudes of the detection state for
    each atom.  With ``born`` set, ``uniforms[k] < P`` keeps the detection state
    and otherwise the orthogonal outcome is taken.  A non-positive
    ``tail_threshold`` disables the tail guard.

    Returns ``(steps_recorded, status)`` with status 0 (ok), 1 (null outcome,
    step not recorded) or 2 (tail guard, step recorded).
    """
    dim = d.shape[0]
    roots = np.sqrt(np.arange(1, dim + 1, dtype=float))
    n = np.arange(dim, dtype=float)
    e_br = np.empty(dim, dtype=complex)
    g_br = np.empty(dim, dtype=complex)
    for k in range(angles.shape[0]):
        phase = angles[k] * roots
        c = np.cos(phase)
        s = np.sin(phase)
        # branch amplitudes after the transit: e-branch pairs (e,n)-(g,n+1)
        e_br[:] = ai * c * d
        e_br[:-1] += -1j * bi * s[:-1] * d[1:]
        g_br[0] = bi * d[0]
        g_br[1:] = bi * c[:-1] * d[1:] - 1j * ai * s[:-1] * d[:-1]

        out = afc[k] * e_br + bfc[k] * g_br
        prob = float(np.vdot(out, out).real)
        outcome = 0
        if born and not uniforms[k] < prob:
            out = -np.conj(bfc[k]) * e_br + np.conj(afc[k]) * g_br
            prob = float(np.vdot(out, out).real)
            outcome = 1
        if not prob >= null_eps:
            p_out[k] = prob
            outcome_out[k] = outcome
            return k, 1
        d[:] = out / math.sqrt(prob)
        pop = d.real * d.real + d.imag * d.imag
        mean = float(np.dot(n, pop))
        var = float(np.dot((n - mean) ** 2, pop))
        mean_out[k] = mean
        dn_out[k] = math.sqrt(var)
        p_out[k] = prob
        outcome_out[k] = outcome
        if tail_threshold > 0 and pop[-1] + pop[-2] >= tail_threshold:
            return k + 1, 2
    return angles.shape[0], 0
