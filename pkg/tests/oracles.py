"""Independent reference computations.

Each one is written with plain loops and the math module so it shares no code
path with the package functions it checks.
"""

import cmath
import itertools
import math


def distance_loop(cfg, m, n):
    """Path length from transmit antenna n to receive antenna m (1-indexed)."""
    psi = 2 * math.pi * (n - 1) / cfg.n_tx + cfg.alpha_tx
    vphi = 2 * math.pi * (m - 1) / cfg.n_rx + cfg.alpha_rx
    tx = (cfg.r_tx * math.cos(psi), cfg.r_tx * math.sin(psi), 0.0)
    cx = cfg.d_centers * math.sin(cfg.phi) * math.cos(cfg.theta)
    cy = cfg.d_centers * math.sin(cfg.phi) * math.sin(cfg.theta)
    cz = cfg.d_centers * math.cos(cfg.phi)
    rx = (cx + cfg.r_rx * math.cos(vphi), cy + cfg.r_rx * math.sin(vphi), cz)
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(rx, tx)))


def dft_loop(seq):
    """Unnormalised DFT by direct O(N^2) summation."""
    n = len(seq)
    return [
        sum(seq[i] * cmath.exp(-2j * math.pi * i * k / n) for i in range(n))
        for k in range(n)
    ]


def joint_ml_diagonal(y_tilde, eigenvalues, points):
    """Argmin over all symbol tuples of sum_l |y_l - lambda_l s_l|^2."""
    best, arg = math.inf, None
    for tup in itertools.product(range(len(points)), repeat=len(eigenvalues)):
        val = sum(abs(y_tilde[l] - eigenvalues[l] * points[i]) ** 2 for l, i in enumerate(tup))
        if val < best:
            best, arg = val, tup
    return arg


def joint_ml_full(y, h, points):
    """Argmin over all symbol tuples of ||y - H s||^2, written out element by element."""
    n = len(h[0])
    best, arg = math.inf, None
    for tup in itertools.product(range(len(points)), repeat=n):
        val = 0.0
        for m in range(len(h)):
            acc = y[m]
            for k in range(n):
                acc -= h[m][k] * points[tup[k]]
            val += abs(acc) ** 2
        if val < best:
            best, arg = val, tup
    return arg


def population_variance(values):
    mean = sum(values) / len(values)
    return sum((v - mean) ** 2 for v in values) / len(values)
