"""Reference computations that share no code with the package under test.

The dynamics are re-typed here in the expanded "population times bracket"
form, so a transcription slip in either place shows up as a disagreement.
"""

from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

BASE = dict(s=0.25, k_u=0.5, m=0.25, delta1=0.4, delta2=0.5, gamma=0.025,
            q=0.85, k_w=0.8, n=0.25, T=6, N=0.5, M1=0.4, M2=0.15, A=0.7)
X0 = (0.2, 0.5, 0.7)


def _brackets(u, w, c):
    bu = c["s"] * (1 - u / c["k_u"]) * (u / c["k_u"] - c["m"]) + 1
    bw = c["q"] * (1 - w / c["k_w"]) * (w / c["k_w"] - c["n"]) + 1
    return bu, bw


def ref_step(model, x, h, c):
    u, v, w = x
    if model == "b":
        u, w = u + h * w, w * (1 - h)
        h = 0
    bu, bw = _brackets(u, w, c)
    u_next = u * bu * (1 - c["delta1"] * v)
    v_next = (v + u * bu * c["delta2"] * v) * (1 - c["gamma"])
    if model == "a":
        return (u_next + h * w * bw, v_next, (w - h * w) * bw)
    return (u_next, v_next, w * bw)


def ref_objective(model, h, c, x0=X0):
    x = x0
    for ht in h:
        x = ref_step(model, x, ht, c)
    return x[0] + c["N"] * x[2] - sum(c["M1"] * a * a + c["M2"] * a for a in h)


def exact(c):
    """Parameters as exact rationals of their decimal literals."""
    return {k: Fraction(str(v)) for k, v in c.items()}


def central_fd(f, x, i, step):
    xp = np.array(x, dtype=float)
    xm = xp.copy()
    xp[i] += step
    xm[i] -= step
    return (f(xp) - f(xm)) / (2 * step)


def complex_step_grad(model, h, c, x0=X0, step=1e-30):
    g = np.empty(len(h))
    for t in range(len(h)):
        hc = [complex(a) for a in h]
        hc[t] += 1j * step
        g[t] = ref_objective(model, hc, c, x0).imag / step
    return g


def scipy_optimum(model, c, x0=X0, starts=(0.0, 0.175, 0.35, 0.525, 0.7)):
    """Best multistart L-BFGS-B maximiser of J."""
    T, A = c["T"], c["A"]
    best = None
    for s in starts:
        r = minimize(lambda x: -ref_objective(model, x, c, x0), np.full(T, min(s, A)),
                     bounds=[(0, A)] * T, method="L-BFGS-B",
                     options=dict(ftol=1e-15, gtol=1e-11, maxiter=5000))
        if best is None or r.fun < best.fun:
            best = r
    return best.x, -best.fun
