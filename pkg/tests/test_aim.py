import warnings

import numpy as np
import pytest

from hulthen_aim import aim
from hulthen_aim.aim import AimProblem, aim_trace, quantization_roots, stable_roots
from hulthen_aim.hulthen import HulthenParams, QuantumState, aim_family, epsilon_closed, to_aim_problem
from hulthen_aim.jet import jet_const, jet_identity

P025 = HulthenParams(0.025)  # beta^2 = 80
L = 1


def eps_closed(n, l=L, beta_sq=80.0):
    return epsilon_closed(QuantumState(n, l), beta_sq)


def oscillator_family(E):
    E = np.asarray(E, dtype=float)
    return AimProblem(
        lambda x0, order: jet_identity(x0, order) * 2.0 + np.zeros(E.shape),
        lambda x0, order: jet_const(-(E - 1.0), x0, order),
        domain=(0.0, np.inf),
    )


def oscillator_oracle(degree):
    """Energies admitting a polynomial solution of y'' = 2x y' - (E-1) y.

    Coefficients obey (m+2)(m+1) c_{m+2} = (2m + 1 - E) c_m, i.e. the
    eigenvalues of 1 + 2 diag(m) - shift; solved here as a matrix problem.
    """
    d = degree + 1
    A = np.diag(1.0 + 2.0 * np.arange(d))
    for m in range(d - 2):
        A[m, m + 2] = -(m + 2) * (m + 1)
    return np.sort(np.linalg.eigvals(A).real)


@pytest.mark.parametrize("z0", [0.2, 0.5, 0.8])
def test_delta1_vanishes_at_eps0(z0):
    tr = aim_trace(to_aim_problem(L, P025, eps_closed(0)), z0, 1)
    assert abs(tr.normalized_delta(1)) < 1e-9


def test_printed_lambda1_and_s1():
    eps, l, b2, z = 1.7, 2, P025.beta_sq, 0.5
    tr = aim_trace(to_aim_problem(l, P025, eps), z, 1)
    den = z**2 * (z - 1) ** 2
    lam1 = (
        2 + 6 * eps - 7 * z - 2 * l * z - b2 * z + 12 * z**2 * l - 18 * eps * z - 6 * eps * z * l
        + 12 * eps * z**2 + 11 * z**2 + 4 * eps**2 + l**2 * z + b2 * z**2 + 4 * eps**2 * z**2
        - 8 * eps**2 * z + 6 * eps * z**2 * l + 3 * l**2 * z**2
    ) / den
    s1 = (2 * l + 2 * eps - b2 + 2 * eps * l + l**2 + 1) * (-2 + 5 * z + 2 * eps * z + 2 * l * z - 2 * eps) / den
    assert tr.rows[1].lam == pytest.approx(lam1, rel=1e-13)
    assert tr.rows[1].s == pytest.approx(s1, rel=1e-13)


def test_lambda0_zero_rejected():
    prob = AimProblem(lambda x0, o: jet_const(0.0, x0, o), lambda x0, o: jet_const(-1.0, x0, o))
    with pytest.raises(ValueError, match="lambda0"):
        aim_trace(prob, 0.3, 3)


def test_outside_domain_rejected():
    with pytest.raises(ValueError):
        aim_trace(to_aim_problem(L, P025, 2.0), 1.2, 2)


def test_wrong_jet_shape_rejected():
    prob = AimProblem(lambda x0, o: jet_identity(x0, o + 1), lambda x0, o: jet_const(1.0, x0, o))
    with pytest.raises(ValueError, match="order"):
        aim_trace(prob, 0.3, 2)


def test_recurrence_consistency():
    tr = aim_trace(to_aim_problem(2, P025, 3.3), 0.4, 6)
    for k in range(1, 7):
        cur, prev = tr.rows[k], tr.rows[k - 1]
        assert cur.delta == cur.lam * prev.s - prev.lam * cur.s


def test_trace_start_row_follows_minus_one_convention():
    tr = aim_trace(to_aim_problem(1, P025, 2.0), 0.5, 0)
    assert tr.rows[0].delta == -tr.rows[0].s


def test_oscillator_roots_match_oracle():
    k = 5
    roots = quantization_roots(oscillator_family, 0.7, k, (0.0, 2 * k + 2.5), grid=800)
    expected = oscillator_oracle(k)
    np.testing.assert_allclose(roots, expected, rtol=1e-10)
    # the even ladder 1, 5, 9 is a subset
    for e in (1.0, 5.0, 9.0):
        assert min(abs(np.array(roots) - e)) < 1e-9


def test_quantization_roots_k1():
    roots = quantization_roots(aim_family(L, P025), 0.5, 1, (0.0, 50.0))
    assert min(abs(np.array(roots) - 19.0)) < 1e-9
    assert min(abs(np.array(roots) - eps_closed(0))) < 1e-9


def test_quantization_roots_k2_contains_eps1():
    roots = quantization_roots(aim_family(L, P025), 0.5, 2, (0.0, 50.0))
    assert min(abs(np.array(roots) - eps_closed(1))) < 1e-9


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_delta_k_roots_are_eps0_to_epsk(k):
    roots = quantization_roots(aim_family(L, P025), 0.5, k, (0.0, 40.0))
    expected = sorted(eps_closed(n) for n in range(k + 1) if eps_closed(n) > 0)
    np.testing.assert_allclose(roots, expected, atol=1e-9)


def test_empty_bracket_gives_no_roots():
    assert quantization_roots(aim_family(L, P025), 0.5, 3, (0.0, 0.001)) == []


def test_degenerate_bracket_rejected():
    with pytest.raises(ValueError):
        quantization_roots(aim_family(L, P025), 0.5, 2, (1.0, 1.0))


def test_stable_eps0_is_k_independent():
    fam = aim_family(L, P025)
    for k in range(1, 9):
        roots = quantization_roots(fam, 0.5, k, (0.0, 40.0))
        assert abs(roots[-1] - 19.0) < 1e-10


def test_eps2_enters_at_k2_and_stabilizes_at_k3():
    fam = aim_family(L, P025)
    target = eps_closed(2)
    hist = aim.root_history(fam, 0.5, 0, 4, (0.0, 40.0))
    present = {k: min((abs(r - target) for r in hist[k]), default=np.inf) < 1e-9 for k in hist}
    assert present == {0: False, 1: False, 2: True, 3: True, 4: True}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", aim.AimConvergenceWarning)
        stable = aim.stable_from_history(hist, 1e-9)
    match = [s for s in stable if abs(s.root - target) < 1e-9]
    assert match and match[0].k_stabilized == 3 and match[0].k_first == 2


def test_zero_tolerance_only_exact_repeats():
    fam = aim_family(L, P025)
    hist = aim.root_history(fam, 0.5, 1, 4, (0.0, 40.0))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", aim.AimConvergenceWarning)
        exact = aim.stable_from_history(hist, 0.0)
        loose = aim.stable_from_history(hist, 1e-9)
    loose_roots = {s.root for s in loose}
    for s in exact:
        assert s.root in loose_roots
        # bit-identical at the start of the run
        assert s.root in hist[s.k_first]


def test_unconverged_root_warns_with_values():
    with pytest.warns(aim.AimConvergenceWarning, match="not converged"):
        stable_roots(aim_family(L, P025), 0.5, 1, 3, (0.0, 40.0))


def test_stable_roots_requires_increasing_k():
    with pytest.raises(ValueError):
        stable_roots(aim_family(L, P025), 0.5, 3, 3, (0.0, 40.0))


def test_z0_invariance():
    fam = aim_family(2, HulthenParams(0.05))
    sets = [quantization_roots(fam, z0, 4, (0.0, 20.0)) for z0 in (0.3, 0.5, 0.7)]
    assert len({len(s) for s in sets}) == 1
    for a in sets:
        for b in sets:
            np.testing.assert_allclose(a, b, atol=1e-9)


@pytest.mark.parametrize("n,l", [(0, 0), (1, 1), (2, 2), (3, 1)])
def test_delta_vanishes_for_all_later_k(n, l):
    p = HulthenParams(0.025)
    eps = epsilon_closed(QuantumState(n, l), p.beta_sq)
    tr = aim_trace(to_aim_problem(l, p, eps), 0.5, n + 4)
    for k in range(max(1, n), n + 5):
        assert abs(tr.normalized_delta(k)) < 1e-8


def test_stable_root_reports_value_at_stabilization():
    from hulthen_aim.aim import stable_from_history

    hist = {0: [10.0], 1: [10.0 + 1e-12], 2: [10.0 + 5e-9]}
    (root,) = stable_from_history(hist, 1e-9)
    assert root.k_first == 0 and root.k_stabilized == 1
    assert root.root == 10.0 + 1e-12


def test_stability_tolerance_scales_with_root():
    from hulthen_aim.aim import AimConvergenceWarning, stable_from_history

    assert stable_from_history({0: [100.0], 1: [100.0 + 5e-8]}, 1e-9)
    with pytest.warns(AimConvergenceWarning):
        assert not stable_from_history({0: [0.5], 1: [0.5 + 5e-9]}, 1e-9)


@pytest.mark.parametrize("n", range(4))
def test_energy_aim_off_centre_expansion_point(n):
    from hulthen_aim.hulthen import QuantumState, energy_aim, energy_closed

    st_ = QuantumState(n, 0)
    assert energy_aim(st_, P025, z0=0.3).energy == pytest.approx(energy_closed(st_, P025).energy, abs=1e-10)
