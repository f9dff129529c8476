"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines; every tolerance is pinned here.
"""

import time

import numpy as np
import pytest
from scipy.linalg import expm, solve_continuous_lyapunov

from kcontract import certify as ce
from kcontract import combinatorics as cb
from kcontract import compound as cp
from kcontract import dynamics as dy
from kcontract import measures as ms
from kcontract import models as mz
from kcontract import spectra as sp
from kcontract.measures import MeasureSpec, Norm

ALL_NORMS = (Norm.L1, Norm.L2, Norm.LINF)


def _report(num, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} {name}: {status}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {num} {name}: {detail}"


def test_criterion_01_cauchy_binet_suite():
    rng = np.random.default_rng(101)
    start = time.time()
    worst = 0.0
    for _ in range(200):
        n, p, m = rng.integers(2, 8, size=3)
        a = rng.standard_normal((n, p))
        b = rng.standard_normal((p, m))
        for k in range(1, min(n, p, m) + 1):
            lhs = cp.mult_compound(a @ b, k)
            rhs = cp.mult_compound(a, k) @ cp.mult_compound(b, k)
            rel = np.max(np.abs(lhs - rhs) / (1.0 + np.abs(lhs)))
            worst = max(worst, float(rel))
    elapsed = time.time() - start
    _report(
        1, "cauchy-binet", worst <= 1e-9 and elapsed < 10.0,
        f"worst rel err {worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_02_additive_compound_correctness():
    rng = np.random.default_rng(102)
    eps = 1e-6
    worst_fd = 0.0
    for _ in range(100):
        a = rng.standard_normal((5, 5))
        for k in (2, 3, 4):
            r = cb.binomial(5, k)
            fd = (cp.mult_compound(np.eye(5) + eps * a, k) - np.eye(r)) / eps
            worst_fd = max(worst_fd, float(np.max(np.abs(fd - cp.add_compound(a, k)))))
    worst_schwarz = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        a = rng.standard_normal((n, n))
        diff = np.max(np.abs(cp.schwarz_n_minus_1(a) - cp.add_compound(a, n - 1)))
        worst_schwarz = max(worst_schwarz, float(diff))
    _report(
        2, "additive-compound", worst_fd <= 1e-4 and worst_schwarz <= 1e-12,
        f"fd err {worst_fd:.2e}, closed-form err {worst_schwarz:.2e}",
    )


def test_criterion_03_minor_example():
    a = np.array([[4.0, 5.0], [-1.0, 4.0], [0.0, 3.0]])
    got = cp.minor(a, (1, 3), (1, 2))
    _report(3, "minor-example", got == 12.0, f"got {got}")


def test_criterion_04_spectral_sum_property():
    rng = np.random.default_rng(104)
    worst_ratio = 0.0
    for _ in range(100):
        a = rng.standard_normal((6, 6))
        for k in (2, 3):
            rep = sp.compound_spectrum_check(a, k, check_products=False)
            worst_ratio = max(worst_ratio, rep.sum_distance / (1e-6 * rep.scale))
    _report(
        4, "spectral-sums", worst_ratio <= 1.0,
        f"worst distance at {worst_ratio:.3f} of the 1e-6*scale budget",
    )


def test_criterion_05_exponential_identity():
    rng = np.random.default_rng(105)
    worst = 0.0
    for n, k in ((3, 2), (4, 2), (4, 3), (5, 2), (5, 3)):
        a = 0.8 * rng.standard_normal((n, n))
        ct = dy.compound_transition(lambda t: a, k, (0.0, 1.0), 1e-3)
        want = cp.mult_compound(expm(a), k)
        worst = max(worst, float(np.max(np.abs(ct.final - want))))
    _report(5, "exp-compound-identity", worst <= 1e-6, f"max err {worst:.2e}")


def test_criterion_06_cos_ltv_reproduction():
    from kcontract.models import cos_ltv_matrix, cos_ltv_transition

    mt = dy.transition_matrix(cos_ltv_matrix, (0.0, 20.0), 1e-3)
    phi_err = 0.0
    det_err = 0.0
    for i in range(0, len(mt.times), 100):
        t = mt.times[i]
        phi_err = max(phi_err, float(np.max(np.abs(mt.matrices[i] - cos_ltv_transition(t)))))
        det_err = max(det_err, abs(np.linalg.det(mt.matrices[i]) - np.exp(-t)))

    rep = dy.asymptotic_subspace(cos_ltv_matrix, 2, t_max=30.0, h=1e-3)
    dims_ok = rep.decaying_dimension == 1 == rep.required_dimension

    entry = mz.model("cos_ltv")
    limit_err = 0.0
    for a in (np.array([2.0, 1.0]), np.array([0.5, -1.25])):
        traj = dy.integrate(entry.system, a, (0.0, 25.0), 1e-3)
        want = np.array([0.0, a[1] - a[0] / 2.0])
        limit_err = max(limit_err, float(np.max(np.abs(traj.states[-1] - want))))

    ok = phi_err <= 1e-6 and det_err <= 1e-6 and dims_ok and limit_err <= 1e-5
    _report(
        6, "cos-ltv",
        ok,
        f"phi {phi_err:.1e}, det {det_err:.1e}, d={rep.decaying_dimension}, "
        f"limit {limit_err:.1e}",
    )


def test_criterion_07_volume_decay():
    diag2 = mz.model("diag2")
    anchors = [np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.zeros(2)]
    fr = dy.variational_frame(diag2.system, anchors, [0.0, 0.0], (0.0, 10.0), 1e-3)
    tr = dy.volume_trace(fr, Norm.L1)
    diag_err = float(np.max(np.abs(tr.norms - np.exp(-fr.times) * tr.norms[0])))
    cert = ce.certify_lti(np.diag([3.0, -4.0]), 2, MeasureSpec(Norm.L1))

    osc = mz.model("oscillator")
    fro = dy.variational_frame(osc.system, anchors, [0.0, 0.0], (0.0, 20.0), 1e-3)
    tro = dy.volume_trace(fro, Norm.L2)
    osc_drift = float(np.max(np.abs(tro.norms - tro.norms[0])))

    ok = (
        diag_err <= 1e-6
        and cert.verdict == "CERTIFIED"
        and cert.eta == pytest.approx(1.0)
        and osc_drift <= 1e-8
    )
    _report(
        7, "volume-decay", ok,
        f"diag2 err {diag_err:.1e}, eta {cert.eta}, oscillator drift {osc_drift:.1e}",
    )


def test_criterion_08_measure_formula_equivalence():
    rng = np.random.default_rng(108)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 9))
        a = rng.standard_normal((n, n))
        for k in range(1, n + 1):
            ak = cp.add_compound(a, k)
            for norm in ALL_NORMS:
                direct = ms.measure_k_direct(a, k, MeasureSpec(norm))
                via = ms.measure(ak, MeasureSpec(norm))
                worst = max(worst, abs(direct - via))
    _report(8, "measure-k-equivalence", worst <= 1e-10, f"max |diff| {worst:.2e}")


def test_criterion_09_graded_structure():
    rng = np.random.default_rng(109)
    ok = True
    detail = ""
    for trial in range(50):
        n = int(rng.integers(3, 8))
        k = int(rng.integers(1, n))
        eta = float(rng.uniform(0.2, 2.0))
        lam = np.sort(rng.standard_normal(n))[::-1]
        lam -= (np.sum(lam[:k]) + eta) / k  # top-k sum becomes exactly -eta
        q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        skew = rng.standard_normal((n, n))
        a = q @ np.diag(lam) @ q.T + 0.5 * (skew - skew.T)
        mu_k = ms.measure_k_direct(a, k, MeasureSpec(Norm.L2))
        if mu_k > -eta + 1e-9:
            ok, detail = False, f"construction broke at trial {trial}"
            break
        for ell in range(k + 1, n + 1):
            mu_ell = ms.measure_k_direct(a, ell, MeasureSpec(Norm.L2))
            if not mu_ell < mu_k:
                ok, detail = False, f"mu2 not decreasing at trial {trial}, l={ell}"
                break
            mu_k = mu_ell
        if not ok:
            break
    _report(9, "graded-structure", ok, detail or "50 constructions")


def test_criterion_10_seir_structural_checks():
    entry = mz.model("seir3")
    sysm = entry.system

    # Metzler structure of J^[2] on an interior grid with >= 10^4 points
    omega = dy.BoxDomain.of([0.005] * 3, [0.33] * 3, (22, 22, 22))
    pts = omega.grid()
    min_off = np.inf
    for x in pts:
        j2 = cp.add_compound(sysm.jacobian(0.0, x), 2)
        off = j2 - np.diag(np.diag(j2))
        min_off = min(min_off, float(np.min(off)))
    metzler_ok = min_off >= -1e-12

    # incidence-slope identity at 10^3 random interior points
    rng = np.random.default_rng(110)
    slope_ok = True
    p = entry.parameters
    for x in rng.uniform(0.01, 0.33, size=(1000, 3)):
        f1 = x[0] ** p["q"] * x[2] ** p["p"]
        d3 = p["p"] * x[0] ** p["q"] * x[2] ** (p["p"] - 1.0)
        if d3 > f1 / x[2] + 1e-12:
            slope_ok = False
            break

    # forward invariance of the simplex for t <= 50
    inv_ok = True
    for x0 in ([0.6, 0.2, 0.15], [0.9, 0.05, 0.01]):
        traj = dy.integrate(sysm, x0, (0.0, 50.0), 1e-3)
        if np.min(traj.states) < -1e-9 or np.max(np.sum(traj.states, axis=1)) > 1 + 1e-9:
            inv_ok = False
            break

    # averaged scaled-measure bound along an integrated trajectory
    traj = dy.integrate(sysm, [0.6, 0.2, 0.15], (0.0, 50.0), 1e-3)
    thin = dy.Trajectory(times=traj.times[::10], states=traj.states[::10])
    diag = mz.seir_orbit_diagnostics(entry, thin, window=20.0)
    avg_ok = diag.average_mu <= -diag.zeta + 1e-3 and diag.min_margin >= -1e-6

    ok = metzler_ok and slope_ok and inv_ok and avg_ok
    _report(
        10, "seir-structure", ok,
        f"min offdiag {min_off:.1e}, avg mu {diag.average_mu:.4f} <= "
        f"{-diag.zeta + 1e-3:.4f}",
    )


def test_criterion_11_floquet_machinery():
    entry = mz.model("hopf")
    res = dy.floquet(entry.system, [0.0, 1.2], h=1e-3)
    radius_err = abs(np.linalg.norm(res.orbit_start) - 1.0)
    nontrivial = float(np.min(np.abs(res.multipliers)))
    mult_err = abs(nontrivial - np.exp(-4.0 * np.pi)) / np.exp(-4.0 * np.pi)
    ok = (
        radius_err <= 1e-6
        and mult_err <= 0.01
        and res.compound_spectral_radius < 1.0
        and res.verdict == "ORBITALLY_STABLE"
    )
    _report(
        11, "floquet", ok,
        f"radius err {radius_err:.1e}, multiplier rel err {mult_err:.2e}, "
        f"rho2 {res.compound_spectral_radius:.2e}",
    )


def test_criterion_12_control_check():
    a = np.array([[-1.0, 2.0], [0.0, -3.0]])
    p = solve_continuous_lyapunov(a.T, -np.eye(2))
    sysm = dy.SystemModel(dim=2, field=lambda t, x: a @ x, jacobian=lambda t, x: a)
    g = np.array([[1.0], [0.5]])
    omega = dy.BoxDomain.of([-1, -1], [1, 1], (7, 7))

    good = ce.control_check(sysm, lambda x: g, lambda x: np.zeros(1), p, omega)
    bad = ce.control_check(sysm, lambda x: g, lambda x: 5.0 * (g.T @ p @ x), p, omega)
    ok = (
        good.verdict == "CERTIFIED"
        and good.extras["equilibria"] == [[0.0, 0.0]]
        and bad.verdict == "NOT_CERTIFIED"
        and "input_term_measure" in bad.witness
        and "point" in bad.witness["input_term_measure"]
    )
    _report(
        12, "control-check", ok,
        f"good={good.verdict}, bad fails at "
        f"{bad.witness.get('input_term_measure', {}).get('point')}",
    )


def test_criterion_13_rk4_order():
    details = []
    ok = True
    for name in ("diag2", "cos_ltv"):
        entry = mz.model(name)
        span = (0.0, 1.0) if name == "diag2" else (0.0, 20.0)
        coarse = dy.integrate(entry.system, [1.0, 1.0], span, 2e-3).oracle_max_error
        fine = dy.integrate(entry.system, [1.0, 1.0], span, 1e-3).oracle_max_error
        ratio = coarse / fine
        order = np.log2(ratio)
        details.append(f"{name} ratio {ratio:.1f} order {order:.2f}")
        ok = ok and ratio >= 13.0 and order >= 3.8
    _report(13, "rk4-order", ok, "; ".join(details))
