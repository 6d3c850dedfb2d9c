"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v``; the lines are collected in an
"acceptance criteria" section of the terminal summary. Running this file
directly with ``python`` prints the same lines.
"""

import time

import numpy as np

from nlw_strichartz.functional import (CONSTANTS, SPHERE_VOLUME, best_theta,
                                       s1_from_closed_form, scal, scal_closed_form,
                                       scal_quadrature4)
from nlw_strichartz.noninv import dt_norm_fd, dt_norm_formula, snapshot
from nlw_strichartz.penrose import evolve_pair, l4_norm4, square_grid, theta_field
from nlw_strichartz.picard import (SolverConfig, candidate_max, expansion_coefficient,
                                   order_fit, perturbation_residual, solve)
from nlw_strichartz.profiles import classify, mixed_l4_decay, parse_sequence
from nlw_strichartz.projection import (ManifoldParams, gamma_apply, gamma_transform,
                                       gram_matrix, project_radial)
from nlw_strichartz.sobolev import DataPair, gaussian_profile, pair_norm_sq, theta_pair

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_sobolev_calibration():
    errs, times = [], []
    for theta in (0.0, np.pi / 3, np.pi / 2):
        start = time.perf_counter()
        value = pair_norm_sq(theta_pair(theta))
        times.append(time.perf_counter() - start)
        errs.append(abs(value / SPHERE_VOLUME - 1))
    ok = max(errs) < 1e-8 and max(times) < 1.0
    record(1, ok, f"max rel err {max(errs):.1e} (< 1e-8), slowest {max(times):.2f} s (< 1 s)")


def test_criterion_02_linear_strichartz_value():
    start = time.perf_counter()
    field = evolve_pair(theta_pair(0.0), square_grid(96))
    value = l4_norm4(field)
    elapsed = time.perf_counter() - start
    err = abs(value / (3 * np.pi**3 / 4) - 1)
    s0_err = abs(value / SPHERE_VOLUME**2 / CONSTANTS.s0 - 1)
    ok = err < 1e-8 and s0_err < 1e-8 and elapsed < 5.0
    record(2, ok, f"rel err {err:.1e} (< 1e-8), S0 rel err {s0_err:.1e}, {elapsed:.2f} s (< 5 s)")


def test_criterion_03_penrose_exactness():
    worst = 0.0
    for theta in (0.0, np.pi / 4, np.pi / 2, 2.0):
        field = evolve_pair(theta_pair(theta), square_grid(96))
        worst = max(worst, float(np.abs(field.values - theta_field(theta, 96).values).max()))
    record(3, worst < 1e-10, f"sup error {worst:.1e} (< 1e-10) over 4 phases")


def test_criterion_04_sharp_second_order_functional():
    start = time.perf_counter()
    worst = 0.0
    for theta in np.linspace(0.0, np.pi / 2, 5):
        exact = scal_closed_form(theta)
        quad = scal_quadrature4(theta, 200)
        pipe = scal(theta_field(theta, 200))
        worst = max(worst, abs(quad / exact - 1), abs(pipe / exact - 1))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and elapsed < 30.0
    record(4, ok, f"max rel err {worst:.1e} (< 1e-6) at n=200, 5 phases, {elapsed:.1f} s (< 30 s)")


def test_criterion_05_constants():
    focusing = 29 / (2**10 * np.pi**3)
    defocusing = 5 / (2**10 * np.pi**3)
    closed_ok = (np.isclose(s1_from_closed_form(1), focusing, rtol=1e-15, atol=0)
                 and np.isclose(s1_from_closed_form(-1), defocusing, rtol=1e-15, atol=0))
    numeric = [scal_quadrature4(best_theta(s), 200) / SPHERE_VOLUME**3 for s in (1, -1)]
    errs = [abs(numeric[0] / focusing - 1), abs(numeric[1] / defocusing - 1)]
    # the quoted decimals 9.1334e-4 and 1.5747e-4 are approximations
    # (29/(2^10 pi^3) = 9.13374e-4), so they are checked at 1e-4 relative
    decimals_ok = (abs(focusing / 9.1334e-4 - 1) < 1e-4 and abs(defocusing / 1.5747e-4 - 1) < 1e-4)
    ok = closed_ok and max(errs) < 1e-10 and decimals_ok
    record(5, ok, f"S1+ = {focusing:.6e}, S1- = {defocusing:.6e}; closed form exact: {closed_ok}, "
                  f"numeric rel err {max(errs):.1e} (< 1e-10)")


def test_criterion_06_picard_orders():
    start = time.perf_counter()
    deltas = np.geomspace(0.05, 0.4, 8)
    fits = [order_fit(0.0, s, deltas, 96) for s in (1, -1)]
    elapsed = time.perf_counter() - start
    ok = all(abs(f.slope1 - 3) <= 0.2 and abs(f.slope2 - 5) <= 0.3 for f in fits) and elapsed < 300
    slopes = ", ".join(f"{f.slope1:.3f}/{f.slope2:.3f}" for f in fits)
    record(6, ok, f"slopes (sigma=+1, -1) {slopes} (3 +- 0.2 / 5 +- 0.3), {elapsed:.1f} s")


def test_criterion_07_expansion_coefficient():
    res = expansion_coefficient(0.0, 1, np.geomspace(0.2, 0.5, 5), 96)
    err = abs(res.c6_measured / res.predicted_eq_factor4 - 1)
    ok = err < 0.02 and res.c8_spread < 0.25
    record(7, ok, f"c6 = {res.c6_measured:.6e} vs 4 S(v0)/|S3|^3 = {res.predicted_eq_factor4:.6e} "
                  f"(rel err {err:.1e} < 2%), c8 spread {res.c8_spread:.1%} (< 25%); "
                  f"ratio to sigma*S1 = {res.c6_measured / res.predicted_s1:.4f} (not adjudicated)")


def test_criterion_08_sign_structure():
    deltas = np.geomspace(0.2, 0.5, 5)
    c6 = {s: expansion_coefficient(best_theta(s), s, deltas, 96).c6_measured for s in (1, -1)}
    star = {s: candidate_max(0.3, s)[0] for s in (1, -1)}

    def mod_pi(x, target):
        d = (x - target) % np.pi
        return min(d, np.pi - d) < 1e-12

    ok = c6[1] > 0 and c6[-1] < 0 and mod_pi(star[1], 0.0) and mod_pi(star[-1], np.pi / 2)
    record(8, ok, f"c6(+1) = {c6[1]:.3e} > 0, c6(-1) = {c6[-1]:.3e} < 0, "
                  f"theta*(+1) = {star[1]:.4f}, theta*(-1) = {star[-1]:.4f}")


def test_criterion_09_projection():
    rng = np.random.default_rng(2024)
    residuals, param_errs, orth = [], [], []
    for _ in range(4):
        truth = ManifoldParams(rng.uniform(0.5, 2.0), np.exp(rng.uniform(-0.7, 0.7)),
                               rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1))
        res = project_radial(gamma_transform(truth.as_array()))
        err = np.abs(res.params.as_array() - truth.as_array())
        err[2] = min(err[2], 2 * np.pi - err[2])
        residuals.append(res.residual)
        param_errs.append(err.max())
        orth.append(res.orthogonality)
    base = gamma_apply(ManifoldParams(1.0, 1.2, 0.5, 0.2))
    off = project_radial(DataPair(base.f0 + gaussian_profile(0.1, 0.7), base.f1))
    orth.append(off.orthogonality)
    eig = min(gram_matrix(at).eigenvalues.min()
              for at in (ManifoldParams(), ManifoldParams(1.3, 0.6, 2.0, 0.5)))
    ok = max(residuals) < 1e-8 and max(param_errs) < 1e-5 and max(orth) < 1e-5 and eig > 0
    record(9, ok, f"residual {max(residuals):.1e} (< 1e-8), parameter error {max(param_errs):.1e} "
                  f"(< 1e-5), orthogonality {max(orth):.1e} (< 1e-5), min Gram eigenvalue {eig:.3f}")


def test_criterion_10_non_invariance():
    # t0 = 0.25: at t0 = 0 the theta = pi/2 derivative is O(delta^10), about
    # 1e-12, below what a relative comparison can resolve
    t0 = 0.25
    worst = 0.0
    for sigma in (1, -1):
        for theta in (0.0, np.pi / 4, np.pi / 2):
            for delta in (0.2, 0.3):
                field = solve(None, SolverConfig(sigma=sigma, delta=delta, theta=theta)).field
                formula = dt_norm_formula(snapshot(field, t0), sigma)
                fd = dt_norm_fd(theta, sigma, delta, t0, 1e-3, field=field)
                worst = max(worst, abs(formula - fd) / abs(formula))
    field = solve(None, SolverConfig(sigma=1, delta=0.3, theta=np.pi / 4)).field
    example = abs(1 - dt_norm_fd(np.pi / 4, 1, 0.3, 0.0, 1e-3, field=field)
                  / dt_norm_formula(snapshot(field, 0.0), 1))
    linear = solve(None, SolverConfig(sigma=0, delta=0.3, theta=np.pi / 4)).field
    free = max(abs(dt_norm_formula(snapshot(linear, t0), 0)),
               abs(dt_norm_fd(np.pi / 4, 0, 0.3, t0, field=linear)))
    still = solve(None, SolverConfig(sigma=1, delta=0.3, theta=0.0, anchor="zero")).field
    theta0 = max(abs(dt_norm_formula(snapshot(still, 0.0), 1)),
                 abs(dt_norm_fd(0.0, 1, 0.3, 0.0, field=still)))
    ok = worst < 1e-4 and example < 1e-4 and free < 1e-8 and theta0 < 1e-8
    record(10, ok, f"sweep (12 cases, t0={t0}) max rel err {worst:.1e}, t0=0 example {example:.1e} "
                   f"(< 1e-4); sigma=0 {free:.1e}, theta=0 {theta0:.1e} (< 1e-8)")


def test_criterion_11_profiles():
    pairs = [("ell=2^n", "ell=1", 16, "lorentz"),
             ("lambda=2^n", "lambda=1", 16, "rescaling"),
             ("ell=2^n", "ell=2^n, phi=1.0", 16, "angular"),
             ("t=n", "t=0", 2000, "translation")]
    verdicts = [classify(parse_sequence(a), parse_sequence(b), n).kind for a, b, n, _ in pairs]
    match = verdicts == [k for *_, k in pairs]
    w = theta_field(0.0, 96)
    dec = mixed_l4_decay(w, w, parse_sequence("lambda=2^n"), parse_sequence("lambda=1"), 2.0,
                         range(9))
    ratio = dec.values[-1] / dec.values[0]
    ok = match and ratio < 0.05
    record(11, ok, f"verdicts {verdicts}; mixed integral ratio at n=8 {ratio:.4f} (< 0.05)")


def test_criterion_12_perturbation():
    eps = (0.01, 0.02, 0.04)
    ratios = [perturbation_residual(0.0, 1, 0.3, e) / (e * 0.3**2) for e in eps]
    spread = max(ratios) / min(ratios) - 1
    record(12, spread < 0.3, f"residual/(eps delta^2) = "
                             f"{', '.join(f'{r:.4f}' for r in ratios)}, spread {spread:.1%} (< 30%)")


if __name__ == "__main__":
    for name, func in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                func()
            except AssertionError:
                pass
