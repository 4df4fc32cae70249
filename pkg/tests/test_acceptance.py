"""Acceptance criteria, one test each at the stated tolerance.

Each test records a PASS/FAIL line through the ``acceptance`` fixture; the
lines are printed in the "acceptance criteria" section of the pytest summary.
"""
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from hulthen_aim.aim import stable_roots
from hulthen_aim.cli import potential_curve_records
from hulthen_aim.hulthen import (
    HulthenParams,
    QuantumState,
    aim_family,
    energy_closed,
    epsilon_closed,
    spectroscopic,
    transformed_ode_residual,
    wavefunction_u,
)
from hulthen_aim.numerov import solve_state
from hulthen_aim.refdata import find_row, load_reference, load_table
from hulthen_aim.special import SolvableFamily, ode_residual, w_general

AIM_DELTAS = (0.025, 0.05, 0.1)
Z0S = (0.3, 0.5, 0.7)


def aim_states():
    for d in AIM_DELTAS:
        p = HulthenParams(d)
        for n in range(4):
            for l in range(5):
                st = QuantumState(n, l)
                if energy_closed(st, p).bound:
                    yield st, p


def test_c1_closed_form_reproduces_aim_column(acceptance):
    rows = load_reference()
    worst, bad = 0.0, []
    for row in rows:
        dev = abs(energy_closed(spectroscopic(row.state_label), HulthenParams(row.delta)).binding - row.aim)
        worst = max(worst, dev)
        if dev >= 5e-7:
            bad.append((row.state_label, row.delta, dev))
    pair = energy_closed(spectroscopic("3d"), HulthenParams(0.025)).binding
    pair_ok = abs(pair - find_row("3d", 0.025).aim) < 5e-8 and round(pair, 7) == 0.0437587
    ok = len(rows) == 41 and not bad and pair_ok
    acceptance("C1 closed form vs AIM column", ok, f"rows={len(rows)} max|d|={worst:.2e}")
    assert ok, bad


def test_c2_numerov_true_vs_numerical_column(acceptance):
    t0 = time.perf_counter()
    devs = []
    for row in load_table(1):
        res = solve_state(spectroscopic(row.state_label), HulthenParams(row.delta))
        devs.append((abs(res.binding - row.numerical), row.state_label, row.delta))
    elapsed = time.perf_counter() - t0
    worst = max(devs)
    ok = worst[0] < 2e-6 and elapsed < 60
    acceptance("C2 Numerov true V_eff vs numerical column", ok,
               f"rows={len(devs)} max|d|={worst[0]:.2e} ({worst[1]} {worst[2]}) t={elapsed:.1f}s")
    assert ok, worst


def test_c3_numerov_approx_vs_closed(acceptance):
    cases = sorted({(r.state_label, r.delta) for r in load_reference() if r.delta <= 0.1})
    worst = (0.0, None)
    for label, d in cases:
        st, p = spectroscopic(label), HulthenParams(d)
        dev = abs(solve_state(st, p, approx=True).energy - energy_closed(st, p).energy)
        worst = max(worst, (dev, (label, d)), key=lambda t: t[0])
    ok = worst[0] < 1e-6
    acceptance("C3 Numerov approx V_eff vs closed form", ok,
               f"states={len(cases)} max|d|={worst[0]:.2e} at {worst[1]}")
    assert ok, worst


def test_c4_iterative_aim_exact(acceptance):
    count, worst, problems = 0, 0.0, []
    for st, p in aim_states():
        exact = epsilon_closed(st, p.beta_sq)
        found = {}
        for z0 in Z0S:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                roots = stable_roots(aim_family(st.l, p), z0, 0, st.n + 2, (0.0, p.beta_sq / 2))
            hit = min(roots, key=lambda r: abs(r.root - exact))
            dev = abs(hit.root - exact)
            worst = max(worst, dev)
            if dev >= 1e-9 or hit.k_stabilized != st.n + 1:
                problems.append((st, p.delta, z0, hit))
            found[z0] = hit.root
        if max(found.values()) - min(found.values()) >= 1e-9:
            problems.append((st, p.delta, "z0 spread", found))
        count += 1
    ok = not problems
    acceptance("C4 iterative AIM roots, onset and z0 invariance", ok,
               f"states={count} max|d|={worst:.2e}")
    assert ok, problems[:5]


def _node_count(st, p):
    z = np.linspace(1e-6, 1 - 1e-6, 20_001)
    u = wavefunction_u(st, p, -np.log(z) / p.delta)
    s = np.sign(u[np.abs(u) > 1e-300])
    return int(np.count_nonzero(np.diff(s)))


def test_c5_eigenfunction_validity(acceptance):
    count, worst_res, worst_norm, problems = 0, 0.0, 0.0, []
    zs = np.linspace(0.01, 0.99, 50)
    for st, p in aim_states():
        res = max(abs(transformed_ode_residual(st, p, z)) for z in zs)
        nodes = _node_count(st, p)
        norm, _ = integrate.quad(lambda r: wavefunction_u(st, p, r) ** 2, 0, np.inf,
                                 limit=500, epsabs=1e-13, epsrel=1e-12)
        worst_res = max(worst_res, res)
        worst_norm = max(worst_norm, abs(norm - 1))
        if res >= 1e-8 or nodes != st.n or abs(norm - 1) >= 1e-8:
            problems.append((st, p.delta, res, nodes, norm))
        count += 1
    ok = not problems
    acceptance("C5 eigenfunction residual, nodes, normalization", ok,
               f"states={count} max res={worst_res:.1e} max|norm-1|={worst_norm:.1e}")
    assert ok, problems[:5]


def _w_printed(f, k):
    return (f.N + 2) * k * (2 * f.a + 2 * f.b * f.t + ((f.N + 2) * k + 1) * f.b)


def test_c6_general_family(acceptance):
    exact = all(
        w_general(f, k) == _w_printed(f, k)
        for N in (-1, 0, 1, 2, 3)
        for f in (SolvableFamily(Fraction(7, 3), Fraction(5, 4), Fraction(-1, 6), N),
                  SolvableFamily(Fraction(1, 2), Fraction(-3, 2), Fraction(2), N))
        for k in range(7)
    )
    rng = np.random.default_rng(20260901)
    worst_scaled, worst_raw = 0.0, 0.0
    for _ in range(600):
        N = int(rng.integers(-1, 4))
        n = int(rng.integers(0, 6))
        f = SolvableFamily(rng.uniform(0.1, 3.0), rng.uniform(0.2, 2.0), rng.uniform(-0.4, 2.0), N)
        x = rng.uniform(0.02, 0.98) * f.pole
        worst_scaled = max(worst_scaled, abs(ode_residual(f, n, x, scaled=True)))
        worst_raw = max(worst_raw, abs(ode_residual(f, n, x)))
    ok = exact and worst_scaled < 1e-8
    acceptance("C6 general family w_k and y_n residual", ok,
               f"w exact={exact} max scaled res={worst_scaled:.1e} (unscaled {worst_raw:.1e})")
    assert ok


def test_c7_potential_curve_behaviour(acceptance):
    near = potential_curve_records([0.4], 1, 0.05, 0.05, 1)[0]
    recs = potential_curve_records([0.4], 1, 0.05, 10.0, 400)
    far = [r["centrifugal_rel_err"] for r in recs if r["dr"] > 1]
    monotone = bool(np.all(np.diff(far) > 0))
    ok = near["rel_diff"] < 1e-2 and monotone and len(far) > 10
    acceptance("C7 approximate vs true V_eff curves", ok,
               f"rel_diff(0.05)={near['rel_diff']:.1e} monotone(dr>1)={monotone}")
    assert ok


def test_c8_algebraic_identities(acceptance):
    rng = np.random.default_rng(8)
    Ns = rng.integers(1, 13, size=10_000)
    ds = rng.uniform(1e-4, 0.6, size=10_000)
    worst, degenerate = 0.0, True
    for N, d in zip(Ns.tolist(), ds.tolist()):
        p = HulthenParams(d)
        energies = {energy_closed(QuantumState(N - 1 - l, l), p).energy for l in range(N)}
        degenerate &= len(energies) == 1
        b = -energies.pop()
        worst = max(worst, abs(b - (1 / (2 * N**2) - d / 2 + N**2 * d**2 / 8)))
    ok = degenerate and worst < 1e-14
    acceptance("C8 degeneracy and binding decomposition", ok,
               f"samples=10000 bit-identical={degenerate} max|d|={worst:.1e}")
    assert ok
