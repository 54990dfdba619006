"""Acceptance criteria A1-A9.

Each test prints one PASS/FAIL line straight to the terminal, so a plain
``pytest -v`` run shows the verdicts next to the usual test results.
"""

import math
import time

import numpy as np
import pytest

from oracles import interlacing_bruteforce, pairing_bruteforce, quadratic_perron, rank_mod2
from l1roots.curve_model import (
    FillingPairConfig,
    HomologyClass,
    NecklaceConfig,
    find_interlacing,
    mod2_pairing,
    necklace_incidence,
    nonzero_classes,
    preimage_is_connected,
)
from l1roots.experiments import (
    SweepConfig,
    derived_epsilon,
    epsilon_formula_check,
    geometric_orbit_check,
    reference_epsilon,
    run_sweep,
)
from l1roots.pairing import pairing_via_reweight, pairing_weights, solenoid_pairing
from l1roots.spectral import perron, spectrum_2x2
from l1roots.twist_algebra import base_curve_matrix, is_primitive, necklace_root_matrix

SILVER = 3 + 2 * math.sqrt(2)
UPSILON = np.array([(2 - math.sqrt(2)) / 2, math.sqrt(2) / 2])


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{name}] {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        return ok

    return emit


def test_a1_base_spectra(verdict):
    start = time.perf_counter()
    worst = 0.0
    second_ok = True
    for r, N in [(1, 1), (2, 3), (1, 2)]:
        M = base_curve_matrix(FillingPairConfig(r, N))
        (a, b), (c, d) = M.to_dense()
        lam, vec = quadratic_perron(a, b, c, d)
        pd = perron(M)
        worst = max(worst, abs(pd.root - lam), np.abs(pd.vector - vec).max())
        plus, minus = spectrum_2x2(M)
        second_ok &= 0 < minus < 1 and math.isclose(minus, 1 / plus, rel_tol=1e-12)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and second_ok and elapsed < 1
    verdict("A1", ok, f"max root error {worst:.1e}, second eigenvalue 1/lambda, {elapsed:.2f}s")
    assert ok


def test_a2_matrix_identities(verdict):
    start = time.perf_counter()
    failures = []
    for m in range(2, 7):
        cfg = NecklaceConfig(m, 2)
        root = necklace_root_matrix(cfg, 1, 1)
        psi = root ** m
        if psi ** 2 != root ** (2 * m):
            failures.append(f"identity m={m}")
        if psi.determinant() not in (1, -1):
            failures.append(f"det m={m}")
        if not is_primitive(root ** (2 * m)):
            failures.append(f"primitive m={m}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10
    verdict("A2", ok, f"{', '.join(failures) or 'all identities exact'}, {elapsed:.2f}s")
    assert ok


def test_a3_boundary_entries(verdict, unstable_report):
    start = time.perf_counter()
    cfg, report = unstable_report
    bound_ok = all(
        rec.vector[2 * rec.m - 1] <= 1 / (rec.m * cfg.n - 1) for rec in report.records
    )
    orbits = geometric_orbit_check(cfg)
    worst_orbit = max(o.max_rel_error for o in orbits)
    orbit_ok = all(o.holds for o in orbits)
    decay = max(report.record(10).boundary_entries) < max(report.record(3).boundary_entries)
    elapsed = time.perf_counter() - start
    ok = bound_ok and orbit_ok and decay and elapsed < 60
    verdict("A3", ok, f"bound {bound_ok}, orbit max rel error {worst_orbit:.1e}, "
                      f"boundary decay {decay}, {elapsed:.1f}s")
    assert ok


def test_a4_epsilon_reconciliation(verdict, unstable_report):
    cfg, report = unstable_report
    sub = [rec for rec in report.records if rec.m <= 8]
    matches = epsilon_formula_check(report, cfg, formula=reference_epsilon)
    agree = all(matches[rec.m] for rec in sub)
    worst = max(
        np.abs(np.asarray(rec.epsilon_residual) - reference_epsilon(rec.boundary_entries, 1)).max()
        for rec in sub
    )
    decay = sum(map(abs, report.record(8).epsilon_residual)) < sum(
        map(abs, report.record(2).epsilon_residual)
    )
    derived_worst = max(
        np.abs(np.asarray(rec.epsilon_residual) - derived_epsilon(rec.boundary_entries, 1)).max()
        for rec in sub
    )
    verdict("A4", agree and decay,
            f"closed form max error {worst:.1e} (tol 1e-06), |eps| decays {decay}")
    verdict("A4-derived", derived_worst <= 1e-6,
            f"supplementary: derived closed form max error {derived_worst:.1e}")
    assert decay
    assert agree, f"closed-form residual disagrees with the measured one by {worst:.3e}"


def test_a5_entropy_roots(verdict, unstable_report):
    _, report = unstable_report
    closer = abs(report.record(10).lambda_m_pow_n - SILVER) < abs(
        report.record(2).lambda_m_pow_n - SILVER
    )
    bracketed = all(
        1 < rec.column_sum_bounds[0] < rec.lambda_m_pow_n < rec.column_sum_bounds[1]
        for rec in report.records
    )
    ok = closer and bracketed
    verdict("A5", ok, f"lambda_10^2 - lambda = {report.record(10).lambda_m_pow_n - SILVER:.2e}, "
                      f"bracketed {bracketed}")
    assert ok


def test_a6_averaged_vector(verdict, unstable_report):
    _, report = unstable_report
    gap = {m: np.abs(np.asarray(report.record(m).avg_vector) - UPSILON).sum() for m in (2, 10)}
    pair = {m: max(report.record(m).pairing_gaps.values()) for m in (2, 10)}
    ok = gap[10] < gap[2] and pair[10] < pair[2]
    verdict("A6", ok, f"vector gap {gap[2]:.2e} -> {gap[10]:.2e}, "
                      f"pairing gap {pair[2]:.2e} -> {pair[10]:.2e}")
    assert ok


def test_a7_stable_side(verdict, unstable_report, stable_report):
    _, unstable = unstable_report
    _, stable = stable_report
    worst = max(
        abs(s.lambda_m - u.lambda_m) / u.lambda_m
        for s, u in zip(stable.records, unstable.records)
    )
    decay = max(stable.record(10).boundary_entries) < max(stable.record(3).boundary_entries)
    ok = worst <= 1e-8 and decay and stable.hard_checks_pass
    verdict("A7", ok, f"max relative lambda difference {worst:.1e}, boundary decay {decay}")
    assert ok


def test_a8_interlacing(verdict):
    start = time.perf_counter()
    bad = 0
    for c in nonzero_classes(2):
        for d in nonzero_classes(2):
            independent = rank_mod2([c.coordinates, d.coordinates]) == 2
            witness = find_interlacing(c, d)
            if (witness is not None) != independent:
                bad += 1
                continue
            if witness is None:
                if interlacing_bruteforce(c.coordinates, d.coordinates):
                    bad += 1
                continue
            alpha, beta = witness
            predicates = (
                preimage_is_connected(c, alpha),
                not preimage_is_connected(d, alpha),
                preimage_is_connected(d, beta),
                not preimage_is_connected(c, beta),
            )
            brute = (
                pairing_bruteforce(c.coordinates, alpha.coordinates) == 1,
                pairing_bruteforce(d.coordinates, alpha.coordinates) == 0,
                pairing_bruteforce(d.coordinates, beta.coordinates) == 1,
                pairing_bruteforce(c.coordinates, beta.coordinates) == 0,
            )
            if not (all(predicates) and all(brute)):
                bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 1
    verdict("A8", ok, f"225 ordered pairs, {bad} mismatches, {elapsed:.2f}s")
    assert ok


def test_a9_pairing_formulas(verdict):
    cfg = NecklaceConfig(2, 2)
    inc = necklace_incidence(cfg, 1)
    rng = np.random.default_rng(20261015)
    worst = 0.0
    for _ in range(100):
        u = rng.random(cfg.K)
        w = rng.random(cfg.K)
        direct = pairing_weights(u, w, inc)
        pushed = pairing_via_reweight(u, w, inc)
        worst = max(worst, abs(direct - pushed) / max(1.0, abs(direct)))
    value = pairing_weights(np.ones(cfg.K), np.ones(cfg.K), inc)
    halves = math.isclose(
        solenoid_pairing(value, 2 * cfg.cover_degree), solenoid_pairing(value, cfg.cover_degree) / 2
    )
    ok = worst <= 1e-12 and halves
    verdict("A9", ok, f"max disagreement {worst:.1e}, degree doubling halves {halves}")
    assert ok
