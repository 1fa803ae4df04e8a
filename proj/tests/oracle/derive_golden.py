#!/usr/bin/env python3
"""Independent reference values for the test suite.

Everything here is computed from scratch (brute-force sums, closed forms,
numeric root finding) without touching the C++ library. Run once and commit
the output:

    python3 tests/oracle/derive_golden.py > tests/golden/values.json
"""
import itertools
import json
import math

import numpy as np
from scipy.optimize import brentq


def box(n):
    return [(x, y) for y in range(-n, n + 1) for x in range(-n, n + 1)]


def bc_value(kind, x, y):
    if kind == "plus":
        return 1
    if kind == "minus":
        return -1
    if kind == "dobrushin":
        return 1 if y > 0 else -1
    if kind == "quadrant":
        return 1 if (x >= 0) != (y >= 0) else -1
    raise ValueError(kind)


def brute_force(n, beta, kind, observable=None):
    """Z and <observable> on Lambda_n, H = -sum over bonds meeting the box."""
    sites = box(n)
    index = {s: i for i, s in enumerate(sites)}
    inside = set(sites)
    bonds, fields = [], np.zeros(len(sites))
    for (x, y) in sites:
        for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            t = (x + dx, y + dy)
            if t in inside:
                if (dx, dy) in ((1, 0), (0, 1)):
                    bonds.append((index[(x, y)], index[t]))
            else:
                fields[index[(x, y)]] += bc_value(kind, *t)
    m = len(sites)
    configs = 1 - 2 * ((np.arange(2 ** m)[:, None] >> np.arange(m)[None, :]) & 1)
    energy = -(configs @ fields)
    for a, b in bonds:
        energy -= configs[:, a] * configs[:, b]
    w = np.exp(-beta * energy)
    z = w.sum()
    if observable is None:
        return z, None
    return z, float((w * observable(configs, index)).sum() / z)


def transfer_sigma0(n, beta):
    """<sigma_0> on Lambda_n with plus boundary by a row transfer matrix."""
    side = 2 * n + 1
    states = 1 - 2 * ((np.arange(2 ** side)[:, None] >> np.arange(side)[None, :]) & 1)
    row_energy = -(states[:, :-1] * states[:, 1:]).sum(1) - states[:, 0] - states[:, -1]
    mid = n
    v = np.exp(-beta * (row_energy - states.sum(1)))  # bottom row against the plus layer below
    vs = v * states[:, mid] if n == 0 else v.copy()
    rows = [v]
    coupling = np.exp(beta * (states @ states.T))
    forward = v
    acc = None
    for r in range(1, side):
        forward = (forward @ coupling) * np.exp(-beta * row_energy)
        if r == mid:
            acc = forward * states[:, mid]
        elif r > mid and acc is not None:
            acc = (acc @ coupling) * np.exp(-beta * row_energy)
        rows.append(forward)
    if n == 0:
        acc = vs
    top = np.exp(beta * states.sum(1))
    return float((acc * top).sum() / (forward * top).sum())


def dual_beta(beta):
    return math.atanh(math.exp(-2 * beta))


def onsager_m(beta):
    return (1 - math.sinh(2 * beta) ** -4) ** 0.125


def tau_exact(beta, x, y):
    """Support function of the Wulff shape {cosh u + cosh v <= c}."""
    c = math.cosh(2 * beta) ** 2 / math.sinh(2 * beta)
    a, b = abs(x), abs(y)
    umax = math.acosh(c - 1)
    if b == 0:
        return a * umax
    if a == 0:
        return b * umax

    def g(u):
        v = math.acosh(max(1.0, c - math.cosh(u)))
        return a * math.sinh(v) - b * math.sinh(u)

    u = brentq(g, 0.0, umax, xtol=1e-15)
    return a * u + b * math.acosh(c - math.cosh(u))


def kappa_exact(beta, radius2=400):
    vecs = [(x, y) for x in range(-20, 21) for y in range(-20, 21) if 0 < x * x + y * y <= radius2]
    cache = {}

    def t(x, y):
        k = tuple(sorted((abs(x), abs(y))))
        if k not in cache:
            cache[k] = tau_exact(beta, *k)
        return cache[k]

    v = np.array(vecs)
    tv = np.array([t(*p) for p in vecs])
    nv = np.hypot(v[:, 0], v[:, 1])
    best = math.inf
    for i, (x, y) in enumerate(vecs):
        sx, sy = v[:, 0] + x, v[:, 1] + y
        cross = x * v[:, 1] - y * v[:, 0]
        ok = cross != 0
        ts = np.array([t(a, b) for a, b in zip(sx[ok], sy[ok])])
        num = tv[i] + tv[ok] - ts
        den = nv[i] + nv[ok] - np.hypot(sx[ok], sy[ok])
        best = min(best, float((num / den).min()))
    return best


def dual_pair_n0(beta_star):
    # Dual box of Lambda_0: four dual sites on a 2x2 free square (a 4-cycle).
    num = den = 0.0
    for s in itertools.product((1, -1), repeat=4):
        a, b, d, c = s  # corners in cyclic order a-b-d-c... bonds a-b, b-d, d-c, c-a
        e = a * b + b * d + d * c + c * a
        w = math.exp(beta_star * e)
        den += w
        num += w * a * b
    return num / den


def chain_partition(length, beta):
    """Width-1 strip of `length` sites, plus layer above, below and at both ends."""
    t = np.array([[math.exp(beta * s * u) for u in (1, -1)] for s in (1, -1)])
    field = np.array([math.exp(2 * beta), math.exp(-2 * beta)])  # layers above and below
    v = np.array([math.exp(beta), math.exp(-beta)]) * field  # left end
    for _ in range(length - 1):
        v = (v @ t) * field
    return float(v @ np.array([math.exp(beta), math.exp(-beta)]))


def main():
    out = {}
    z_plus, _ = brute_force(1, 0.6, "plus")
    z_dob, _ = brute_force(1, 0.6, "dobrushin")
    s0 = lambda cfg, idx: cfg[:, idx[(0, 0)]]
    _, sig_n1 = brute_force(1, 0.6, "plus", s0)
    out["gibbs"] = {
        "z_n1_b06_plus": float(z_plus),
        "log_z_n1_b06_plus": math.log(z_plus),
        "log_z_n1_b06_dobrushin": math.log(z_dob),
        "sigma0_n1_b06_plus": sig_n1,
        "sigma0_n2_b06_plus": transfer_sigma0(2, 0.6),
        "chain_w1_l5_b04_plus": chain_partition(5, 0.4),
        "m_star_b06": onsager_m(0.6),
        "m_star_b07": onsager_m(0.7),
        "m_star_b08": onsager_m(0.8),
        "beta_self_dual": brentq(lambda b: math.tanh(b) - math.exp(-2 * b), 0.1, 1.0, xtol=1e-15),
    }
    _, sig_q = brute_force(1, 0.6, "quadrant", s0)
    out["gibbs"]["sigma0_n1_b06_quadrant"] = sig_q
    out["duality"] = {
        "beta_star_b06": dual_beta(0.6),
        "pair_n0_bs031": dual_pair_n0(0.31),
        "ratio_n1_b06_dobrushin": float(z_dob / z_plus),
    }
    tension = {}
    for beta in (0.6, 0.8):
        key = str(beta).replace(".", "")
        tension["axis_b" + key] = tau_exact(beta, 1, 0)
        for p, q in ((1, 0), (4, 1), (3, 1), (2, 1), (3, 2), (1, 1)):
            tension[f"dir_b{key}_{p}_{q}"] = tau_exact(beta, p, q) / math.hypot(p, q)
    tension["axis_b045"] = tau_exact(0.45, 1, 0)
    tension["axis_b03"] = 0.0  # below the self-dual point the tension vanishes
    for beta in (0.6, 0.8, 1.0):
        tension["kappa_b" + str(beta).replace(".", "")] = kappa_exact(beta)
    out["tension"] = tension
    print(json.dumps(out, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
