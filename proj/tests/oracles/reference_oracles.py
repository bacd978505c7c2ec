"""Independent numpy/scipy reference values for the unit tests.

Re-implements the discretization from scratch (cell-centred nodes, triangle
kernel rescaled by its lattice mass) and solves each problem with library
routines unrelated to the C++ code paths: symmetric eigensolvers, Brent's
method, Newton with an analytic Jacobian, adaptive quadrature.

    python reference_oracles.py            # print values
    python reference_oracles.py --write    # refresh reference_values.json
    python reference_oracles.py --check    # compare against reference_values.json
"""
import argparse
import json
import pathlib
import sys

import numpy as np
from scipy import integrate, linalg, optimize

HERE = pathlib.Path(__file__).resolve().parent
FROZEN = HERE / "reference_values.json"


def nodes(n):
    h = 1.0 / n
    return (np.arange(n) + 0.5) * h, h


def triangle(z, delta):
    return np.maximum(0.0, 1.0 - np.abs(z) / delta) / delta


def lattice_mass(delta, h):
    r = int(np.ceil(delta / h)) + 1
    i = np.arange(-r, r + 1)
    return h * triangle(i * h, delta).sum()


def kmat(n, delta, periodic=False):
    x, h = nodes(n)
    d = x[None, :] - x[:, None]
    if periodic:
        d = d - np.floor(d + 0.5)
        shifts = int(np.ceil(delta + 0.5))
        k = sum(triangle(d + s, delta) for s in range(-shifts, shifts + 1))
    else:
        k = triangle(d, delta)
    return h * k / lattice_mass(delta, h)


def dirichlet_zero_eig(n):
    K = kmat(n, 0.5)
    return float(linalg.eigvalsh(K - np.eye(n))[-1])


def secular_root(n, nu):
    x, h = nodes(n)
    a = np.sin(2 * np.pi * x)
    g = lambda lam: h * np.sum(nu / (lam + nu - a)) - 1.0
    lo = a.max() - nu + 1e-12
    hi = lo + 1.0
    while g(hi) > 0:
        hi += 1.0
    root = optimize.brentq(g, lo, hi, xtol=1e-15, rtol=1e-15)
    # Dense check on the rank-one-plus-diagonal matrix.
    A = nu * h * np.ones((n, n)) + np.diag(a - nu)
    top = float(linalg.eigvalsh(A)[-1])
    return float(root), top, float(a.max()), float(a.min()), float(h * a.sum())


def neumann_boundary_mass():
    # b at the first node of a 64-node grid, triangle kernel delta = 0.3.
    x, _ = nodes(64)
    val, _ = integrate.quad(lambda y: triangle(y - x[0], 0.3), 0.0, 1.0, points=[x[0], x[0] + 0.3], epsabs=1e-14)
    return float(val)


def competition(n=256, nu=1.0, delta=0.3):
    x, h = nodes(n)
    K = kmat(n, delta)
    b = K.sum(axis=1)
    r = 1.0 + 0.5 * np.sin(2 * np.pi * x)
    out = {}
    for name, diag in (("dirichlet", np.ones(n)), ("neumann", b)):
        L = nu * (K - np.diag(diag))
        lam0 = float(linalg.eigvalsh(L + np.diag(r))[-1])
        u = r.copy()
        for _ in range(100):
            F = L @ u + (r - u) * u
            J = L + np.diag(r - 2 * u)
            step = np.linalg.solve(J, -F)
            u = u + step
            if np.abs(step).max() < 1e-15:
                break
        res = float(np.abs(L @ u + (r - u) * u).max())
        assert res < 1e-12 and u.min() > 0, (name, res, u.min())
        out[name] = {
            "lambda_at_zero": lam0,
            "steady_max": float(u.max()),
            "steady_min": float(u.min()),
            "steady_mean": float(h * u.sum()),
            "steady_samples": [float(u[i]) for i in (0, n // 4, n // 2, 3 * n // 4, n - 1)],
        }
    return out


def compute():
    root, top, amax, amin, amean = secular_root(256, 1.0)
    return {
        "dirichlet_zero_triangle_0p5": {"n1024": dirichlet_zero_eig(1024), "n256": dirichlet_zero_eig(256)},
        "secular_sine_nu1_n256": {"root": root, "averaged_top_eig": top, "a_max": amax, "a_min": amin, "a_mean": amean},
        "neumann_boundary_mass_n64_triangle_0p3": neumann_boundary_mass(),
        "competition_n256": competition(),
    }


def flatten(d, prefix=""):
    for k, v in d.items():
        key = prefix + k
        if isinstance(v, dict):
            yield from flatten(v, key + ".")
        elif isinstance(v, list):
            for i, x in enumerate(v):
                yield f"{key}[{i}]", x
        else:
            yield key, v


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--write", action="store_true")
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()
    values = compute()
    if args.write:
        FROZEN.write_text(json.dumps(values, indent=2) + "\n")
    if args.check:
        frozen = dict(flatten(json.loads(FROZEN.read_text())))
        fresh = dict(flatten(values))
        bad = [k for k in fresh if k not in frozen or abs(fresh[k] - frozen[k]) > 1e-12 * (1 + abs(frozen[k]))]
        for k in bad:
            print(f"mismatch {k}: fresh {fresh[k]!r} frozen {frozen.get(k)!r}")
        print("ok" if not bad else f"{len(bad)} mismatches")
        return 1 if bad else 0
    if not args.write:
        print(json.dumps(values, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
