#!/usr/bin/env python3
"""Independent reference values for the C++ test suites.

Run from the repository root:  python3 tests/oracles/generate.py
Writes the frozen tables next to this script. Uses scipy and sympy only; no
code is shared with the library.
"""
import math
import os
import random

import numpy as np
import sympy as sp
from scipy.integrate import solve_ivp

HERE = os.path.dirname(os.path.abspath(__file__))
SLOPE = 0.2
TOL = dict(rtol=1e-13, atol=1e-14, method="DOP853")


def n_of(x1):
    return 1.0 + SLOPE * x1


def fmt(v):
    return repr(float(v))


def write(name, body):
    with open(os.path.join(HERE, name), "w") as fh:
        fh.write("// Generated by tests/oracles/generate.py; do not edit.\n")
        fh.write(body)


def hamilton_spread():
    # H = |p|^2 - n(x)^2 on the front x2 = 0, x1 in [-0.5, 0.5], p = n(x) (0, 1).
    times = [0.1, 0.2, 0.3, 0.4, 0.5]
    q = np.linspace(-0.5, 0.5, 64)

    def rhs(_, y):
        x1, x2, p1, p2, s = y
        n = n_of(x1)
        return [2 * p1, 2 * p2, 2 * n * SLOPE, 0.0, 2 * (p1 * p1 + p2 * p2)]

    phases = np.empty((len(times), len(q)))
    for j, x1 in enumerate(q):
        sol = solve_ivp(rhs, (0, 0.5), [x1, 0.0, 0.0, n_of(x1), 0.0], t_eval=times, **TOL)
        phases[:, j] = sol.y[4]
    spreads = phases.max(axis=1) - phases.min(axis=1)
    body = "constexpr double kHamiltonSpreadTimes[] = {%s};\n" % ", ".join(fmt(t) for t in times)
    body += "constexpr double kHamiltonSpread[] = {%s};\n" % ", ".join(fmt(s) for s in spreads)
    write("hamilton_spread.inc", body)


def force_values():
    x1, x2, u1, u2 = sp.symbols("x1 x2 u1 u2", real=True)
    u = sp.symbols("u", positive=True)
    n = 1 + sp.Rational(1, 5) * x1
    W = 1 / u**2 - n**2
    grad = [sp.diff(W, x1), sp.diff(W, x2)]
    W1 = sp.diff(W, u)
    speed = sp.sqrt(u1**2 + u2**2)
    N = [u1 / speed, u2 / speed]
    sub = {u: speed}
    F = []
    for k in range(2):
        acc = 0
        for i in range(2):
            acc += (grad[i] / W1).subs(sub) * (2 * N[i] * N[k] - (1 if i == k else 0))
        F.append(-speed * acc)
    states = [(0.0, 0.0, 1.0, 0.0)]
    rng = random.Random(7)
    for _ in range(6):
        states.append((rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-2, 2), rng.uniform(-2, 2)))
    rows = []
    for s in states:
        vals = {x1: s[0], x2: s[1], u1: s[2], u2: s[3]}
        rows.append("{%s}" % ", ".join(fmt(v) for v in list(s) + [sp.N(F[0].subs(vals), 30), sp.N(F[1].subs(vals), 30)]))
    write("force_values.inc", "constexpr double kForceCases[][6] = {\n  %s};\n" % ",\n  ".join(rows))


def newtonian_reference():
    # x' = u, u' = F(x, u) for W = 1/|u|^2 - n^2 with the wave-front force.
    def force(x, u):
        n = n_of(x[0])
        speed = math.hypot(*u)
        N = u / speed
        g = np.array([-2 * n * SLOPE, 0.0]) / (-2 / speed**3)
        return -speed * (2 * np.dot(g, N) * N - g)

    def rhs(_, y):
        return np.concatenate([y[2:], force(y[:2], y[2:])])

    rows = []
    for angle in (0.0, 0.3, 1.0):
        x0 = np.array([0.1, -0.2])
        u0 = np.array([math.cos(angle), math.sin(angle)]) / n_of(x0[0])
        sol = solve_ivp(rhs, (0, 1), np.concatenate([x0, u0]), **TOL)
        rows.append("{%s}" % ", ".join(fmt(v) for v in [angle, *sol.y[:, -1]]))
    write("newtonian_reference.inc", "constexpr double kNewtonianEnd[][5] = {\n  %s};\n" % ",\n  ".join(rows))


def transport_cases():
    # R1 phi for H = p1^2 + p2^2: 2 grad S . grad phi + (Laplacian S) phi.
    x1, x2 = sp.symbols("x1 x2")
    rng = random.Random(11)
    monos_S = [(a, b) for a in range(4) for b in range(4) if a + b <= 3]
    monos_phi = [(a, b) for a in range(3) for b in range(3) if a + b <= 2]
    rows = []
    for _ in range(50):
        cs = [round(rng.uniform(-2, 2), 3) for _ in monos_S]
        cp = [round(rng.uniform(-2, 2), 3) for _ in monos_phi]
        S = sum(sp.Rational(str(c)) * x1**a * x2**b for c, (a, b) in zip(cs, monos_S))
        phi = sum(sp.Rational(str(c)) * x1**a * x2**b for c, (a, b) in zip(cp, monos_phi))
        X = (round(rng.uniform(-1, 1), 3), round(rng.uniform(-1, 1), 3))
        expr = 2 * (sp.diff(S, x1) * sp.diff(phi, x1) + sp.diff(S, x2) * sp.diff(phi, x2)) + (
            sp.diff(S, x1, 2) + sp.diff(S, x2, 2)) * phi
        val = expr.subs({x1: sp.Rational(str(X[0])), x2: sp.Rational(str(X[1]))})
        rows.append("{{%s}, {%s}, {%s, %s}, %s}" % (
            ", ".join(fmt(c) for c in cs), ", ".join(fmt(c) for c in cp), fmt(X[0]), fmt(X[1]), fmt(sp.N(val, 30))))
    body = "// S monomials x1^a x2^b in order: %s\n" % monos_S
    body += "// phi monomials in order: %s\n" % monos_phi
    body += "struct TransportCase { double S[%d]; double phi[%d]; double x[2]; double expected; };\n" % (
        len(monos_S), len(monos_phi))
    body += "constexpr int kSMonomials[][2] = {%s};\n" % ", ".join("{%d, %d}" % m for m in monos_S)
    body += "constexpr int kPhiMonomials[][2] = {%s};\n" % ", ".join("{%d, %d}" % m for m in monos_phi)
    body += "constexpr TransportCase kTransportCases[] = {\n  %s};\n" % ",\n  ".join(rows)
    write("transport_cases.inc", body)


EXPRESSIONS = [
    ("1 + 0.2*x1", (2.0, 0.0)),
    ("sqrt(x1^2 + x2^2)", (3.0, 4.0)),
    ("-x1^2", (3.0, 1.0)),
    ("2^3^2", (0.0, 0.0)),
    ("(1 + x1) * (1 - x2) / 3", (0.5, 0.25)),
    ("exp(-x1*x1 - x2*x2)", (0.3, -0.7)),
    ("sin(x1) * cos(x2)", (1.1, 2.2)),
    ("log(1 + x1^2)", (0.9, 0.0)),
    ("1/u^2 - (1 + 0.2*x1)^2", (0.4, -0.1)),
    ("x1 - x2 - 1", (5.0, 2.0)),
    ("x1 / x2 / 4", (8.0, 2.0)),
    ("-(-x1)", (1.5, 0.0)),
    ("2*-x1", (1.25, 0.0)),
    ("-2^2", (0.0, 0.0)),
    ("(x1 + x2)^0.5", (1.0, 3.0)),
    ("exp(sin(x1)) - log(sqrt(x2))", (0.7, 2.5)),
    ("0.25*v^2 + (1 + 0.2*x1)^2", (0.3, 0.0)),
    ("1e-3*x1 + 2.5E2", (4.0, 0.0)),
    ("cos(x1)^2 + sin(x1)^2", (0.123, 0.0)),
    ("x1*x2 - x2/x1 + 3", (1.7, -0.6)),
]


def expression_table():
    rows = []
    for src, (a, b) in EXPRESSIONS:
        env = dict(x1=a, x2=b, u=0.7, v=1.3, w=-0.2, sin=math.sin, cos=math.cos, exp=math.exp,
                   sqrt=math.sqrt, log=math.log)
        val = eval(src.replace("^", "**"), {"__builtins__": {}}, env)
        rows.append('{"%s", %s, %s, %s}' % (src, fmt(a), fmt(b), fmt(val)))
    body = "// Variables not listed take u = 0.7, v = 1.3, w = -0.2.\n"
    body += "struct ExpressionCase { const char* src; double x1; double x2; double expected; };\n"
    body += "constexpr ExpressionCase kExpressionCases[] = {\n  %s};\n" % ",\n  ".join(rows)
    write("expression_table.inc", body)


if __name__ == "__main__":
    hamilton_spread()
    force_values()
    newtonian_reference()
    transport_cases()
    expression_table()
