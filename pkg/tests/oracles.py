"""Independent reference computations used by several test modules.

Nothing here goes through the helicity basis or the closed-form propagators.
"""
import math

import numpy as np
import scipy.linalg

from majorana.clifford import alpha_dot, quaternion_units

I_, J_, K_ = quaternion_units()


def bispinor_hamiltonian(p, m):
    """Generator on ``(u, w)`` for the field ``exp(I p.x) u + exp(-I p.x) w``."""
    a_i = alpha_dot(np.asarray(p, dtype=float)) @ I_
    return np.block([[-a_i, -m * J_], [-m * J_, a_i]])


def evolve_bispinors(p, m, u, w, t):
    out = scipy.linalg.expm(t * bispinor_hamiltonian(p, m)) @ np.concatenate([u, w])
    return out[:4], out[4:]


def pair_field(p, u, w, x):
    """Real field of ``exp(I p.x) u + exp(-I p.x) w`` at positions ``x`` (n, 3)."""
    theta = np.asarray(x) @ np.asarray(p, dtype=float)
    return (np.multiply.outer(u + w, np.cos(theta))
            + np.multiply.outer(I_ @ (u - w), np.sin(theta)))


def traveling_from_field(p, m, u0):
    """A+-, B+- of the field that starts as ``exp(I p.x) u0`` alone, read off from the oracle evolution.

    With ``cos`` and ``sin`` parts ``C(t), S(t)`` of the field,
    ``A+ + A- = 2C(0)``, ``B+ + B- = 2S(0)``, ``A+ - A- = 2S(T)``,
    ``B- - B+ = 2C(T)`` at ``E T = pi/2``.
    """
    e = math.hypot(m, np.linalg.norm(p))
    zero = np.zeros(4)

    def parts(t):
        u, w = evolve_bispinors(p, m, u0, zero, t)
        return u + w, I_ @ (u - w)

    c0, s0 = parts(0.0)
    c1, s1 = parts(math.pi / (2 * e))
    a_sum, b_sum, a_diff, b_diff = 2 * c0, 2 * s0, 2 * s1, 2 * c1
    return {
        "A+": 0.5 * (a_sum + a_diff), "A-": 0.5 * (a_sum - a_diff),
        "B+": 0.5 * (b_sum - b_diff), "B-": 0.5 * (b_sum + b_diff),
    }


def grid_inner(f, g, cell):
    return float(np.sum(f * g) * cell)
