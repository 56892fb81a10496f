"""Smoke test for the cartan_bundle extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/*.whl
then run:
    python python/smoke_test.py
"""

import json
import math
import sys

import numpy as np
from scipy.linalg import expm

import cartan_bundle as cb


def homogeneous(omega, v):
    n = len(v)
    h = np.zeros((n + 1, n + 1))
    h[:n, :n] = omega
    h[:n, n] = v
    return h


def check(name, ok):
    print(f"{'ok  ' if ok else 'FAIL'} {name}")
    return ok


def main():
    rng = np.random.default_rng(5)
    results = []

    # exponential against scipy
    a = rng.standard_normal((4, 4))
    omega = a - a.T
    v = rng.standard_normal(4)
    g = cb.se_exp(cb.Screw(omega.tolist(), v.tolist()))
    err = np.abs(np.array(g.homogeneous()) - expm(homogeneous(omega, v))).max()
    results.append(check(f"se_exp vs expm ({err:.1e})", err < 1e-10))

    xi = cb.se_log(g)
    results.append(check("se_log round trip", cb.se_exp(xi).distance(g) < 1e-9))

    # quarter turn about E_1 ∧ E_2
    r = cb.so_exp(cb.SkewMatrix.wedge(0, 1, 2).scale(-math.pi / 2))
    results.append(check("quarter turn", np.allclose(r.apply([1.0, 0.0]), [0.0, 1.0], atol=1e-15)))

    # Y_omega identity: ω Y = (exp ω − I) v
    w = cb.SkewMatrix(omega.tolist())
    y = np.array(cb.y_omega(w, v.tolist()))
    lhs = omega @ y
    rhs = (expm(omega) - np.eye(4)) @ v
    results.append(check("Y_omega identity", np.abs(lhs - rhs).max() < 1e-10))

    # Grassmannian embedding
    plane = cb.Plane(rng.standard_normal((5, 2)).tolist())
    cr = cb.cartan_embed0(plane)
    m = np.array(cr.matrix)
    j = np.diag([-1.0, -1.0, 1.0, 1.0, 1.0])
    results.append(check("embedding is an involution twisted by J", np.allclose((m @ j) @ (m @ j), np.eye(5), atol=1e-12)))
    results.append(check("rho0 inverts the embedding", cb.rho0(cr).distance(plane) < 1e-9))

    # bundle: transporter and equivariance
    p1 = cb.BundlePoint(plane, (np.array(plane.frame) @ [1.0, -2.0]).tolist())
    plane2 = cb.Plane(rng.standard_normal((5, 2)).tolist())
    p2 = cb.BundlePoint(plane2, (np.array(plane2.frame) @ [0.5, 3.0]).tolist())
    t = cb.find_transporter(p1, p2)
    results.append(check("transporter", cb.bundle_act(t, p1).distance(p2) < 1e-9))
    s = cb.rho_inv(p1)
    moved = cb.CartanMotion(cb.twisted_act(t, s.motion, 2), 2)
    results.append(check("rho equivariance", cb.rho(moved).distance(cb.bundle_act(t, p1)) < 1e-9))

    # d_p exponential round trip
    b = rng.standard_normal((3, 2))
    b *= 2.0 / np.linalg.norm(b)
    e = cb.DpElement(b.tolist(), [0.3, -1.1])
    results.append(check("dp round trip", cb.dp_log(cb.dp_exp(e)).distance(e) < 1e-8))

    # sampling determinism and JSON interop
    first = cb.sample("cartan-motion", n=4, p=2, seed=3, samples=2)
    results.append(check("sample determinism", first == cb.sample("cartan-motion", n=4, p=2, seed=3, samples=2)))
    cm = cb.CartanMotion.from_json(json.dumps(first[0]))
    results.append(check("JSON interop", (cm.p, cm.q) == (2, 2)))

    grid = cb.moebius_grid(16, 3, 1.0)
    results.append(check("moebius grid size", len(grid) == 48))

    try:
        cb.Rotation([[1.0, 1.0], [0.0, 1.0]])
        results.append(check("error on non-orthogonal input", False))
    except cb.CartanBundleError as exc:
        results.append(check("error on non-orthogonal input", exc.args[0] == "not_orthogonal"))

    report = cb.verify(n=4, p=2, seed=1, samples=50)
    results.append(check("verify harness", report["pass"]))

    print(f"{sum(results)}/{len(results)} checks passed")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
