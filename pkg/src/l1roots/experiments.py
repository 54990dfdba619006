"""Convergence sweep over the Psi_m family and the checks built on it.

All Perron vectors here are taken in the carrying orientation, i.e. of the
transpose of the weight-update matrices that ``twist_algebra`` builds.  That
is the orientation in which the root matrix moves mass along chi-orbits as
a_{m+im} = xi^{i-1} a_{2m}; Perron roots are the same either way.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .curve_model import FillingPairConfig, NecklaceConfig, necklace_incidence, single_pair_incidence
from .errors import ConfigError, ConvergenceError
from .pairing import WeightVector, averaged_vector, curve_pairing, solenoid_pairing
from .spectral import DEFAULT_MAX_ITER, DEFAULT_TOL, perron
from .twist_algebra import (
    Chi,
    base_curve_matrix_from_word,
    compose,
    lifted_full_matrix,
    necklace_root_matrix,
    root_word,
)

EPS_ATOL = 1e-6
EIGEN_RTOL = 1e-8
# the root matrix has spectral ratio (ratio of Psi_m)^(1/m); give it room
ROOT_MAX_ITER = 10**12

CSV_COLUMNS = [
    "m", "lambda_m", "lambda_m_pow_n", "a_m", "a_m1", "b_m", "b_m1",
    "eps_1", "eps_2", "avg_a", "avg_b", "avg_gap", "pairing_gap_max",
]


@dataclass
class SweepConfig:
    r: int = 1
    N: int = 1
    n: int = 2
    m_min: int = 2
    m_max: int = 10
    side: str = "unstable"
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    eps_atol: float = EPS_ATOL
    eigen_rtol: float = EIGEN_RTOL
    workers: int = 1

    def __post_init__(self):
        FillingPairConfig(self.r, self.N, self.n)
        if self.m_min < 2:
            raise ConfigError(f"m_min must be >= 2, got {self.m_min}")
        if self.m_max < self.m_min:
            raise ConfigError(f"empty m range {self.m_min}..{self.m_max}")
        if self.side not in ("unstable", "stable"):
            raise ConfigError(f"side must be 'unstable' or 'stable', got {self.side!r}")

    @property
    def filling_pair(self) -> FillingPairConfig:
        return FillingPairConfig(self.r, self.N, self.n)

    @property
    def m_range(self) -> range:
        return range(self.m_min, self.m_max + 1)


@dataclass
class MRecord:
    m: int
    lambda_m: float
    lambda_m_pow_n: float
    boundary_entries: list
    epsilon_residual: list
    avg_vector: list
    avg_gap: float
    pairing_gaps: dict
    column_sum_bounds: list
    perron_residual: float
    perron_iterations: int
    checks: dict
    # full Perron vector; kept out of the serialized report
    vector: Optional[np.ndarray] = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("vector")
        return out


@dataclass
class ConvergenceReport:
    config: dict
    base_lambda: float
    base_vector: list
    base_pairings: dict
    records: list
    observations: dict
    tool_version: str = __version__

    def record(self, m: int) -> MRecord:
        for rec in self.records:
            if rec.m == m:
                return rec
        raise KeyError(m)

    @property
    def hard_checks_pass(self) -> bool:
        return all(all(rec.checks.values()) for rec in self.records)

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "tool_version": self.tool_version,
            "base": {
                "lambda": self.base_lambda,
                "vector": self.base_vector,
                "pairings": self.base_pairings,
            },
            "records": [rec.to_json() for rec in self.records],
            "observations": self.observations,
        }

    def csv_rows(self) -> list:
        rows = []
        for rec in self.records:
            a_m, a_m1, b_m, b_m1 = rec.boundary_entries
            rows.append([
                rec.m, rec.lambda_m, rec.lambda_m_pow_n, a_m, a_m1, b_m, b_m1,
                rec.epsilon_residual[0], rec.epsilon_residual[1],
                rec.avg_vector[0], rec.avg_vector[1], rec.avg_gap,
                max(rec.pairing_gaps.values()),
            ])
        return rows

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for row in self.csv_rows():
                writer.writerow([repr(x) if isinstance(x, float) else x for x in row])


def base_perron(cfg: SweepConfig):
    """Downstairs matrix (carrying orientation) and its Perron data."""
    M = base_curve_matrix_from_word(cfg.filling_pair, stable=cfg.side == "stable").T
    return M, perron(M, tol=cfg.tol, max_iter=cfg.max_iter)


def base_test_pairings(vector, r: int) -> dict:
    """I(f, c) and I(f, d) downstairs for a lamination with weights (a, b)."""
    upsilon = WeightVector.labeled([vector[0]], [vector[1]])
    inc = single_pair_incidence(r)
    return {kind: float(curve_pairing(upsilon, kind, inc)) for kind in ("c", "d")}


def lifted_test_pairings(vector, cfg_m: NecklaceConfig, r: int) -> dict:
    """Pairings of the cover lamination with the lifts of c and d, pushed to the solenoid.

    The Perron vector is a probability vector on 2K lifts; scaling it by K puts
    it on the same footing as the lift of a downstairs measure, after which the
    cover pairing divided by the cover degree 2K is the downstairs value.
    """
    K = cfg_m.K
    upsilon = WeightVector(tuple(K * float(x) for x in vector), split=K)
    inc = necklace_incidence(cfg_m, r)
    return {
        kind: float(solenoid_pairing(curve_pairing(upsilon, kind, inc), cfg_m.cover_degree))
        for kind in ("c", "d")
    }


def _sweep_one(cfg: SweepConfig, m: int, base_M, base_vec, base_pairs) -> MRecord:
    n, r, N = cfg.n, cfg.r, cfg.N
    cfg_m = NecklaceConfig(m, n)
    K = cfg_m.K
    stable = cfg.side == "stable"
    root = necklace_root_matrix(cfg_m, r, N, stable=stable)
    psi = root ** m
    psi_n = psi ** n
    identity_ok = psi_n == root ** (m * n)
    det = psi.determinant()

    try:
        pd = perron(psi.T, tol=cfg.tol, max_iter=cfg.max_iter)
    except ConvergenceError as exc:
        exc.m = m
        raise ConvergenceError(f"m={m}: {exc}", residual=exc.residual,
                               iterations=exc.iterations, m=m) from exc
    v = pd.vector
    lam = pd.root
    lam_n = lam ** n
    lo, hi = (int(x) for x in _bounds(psi_n.T))

    a, b = v[:K], v[K:]
    boundary = [float(a[m - 1]), float(a[m % K]), float(b[m - 1]), float(b[m % K])]
    avg = averaged_vector(WeightVector(tuple(v), split=K)).as_array()
    eps = lam_n * avg - base_M.to_numpy() @ avg

    lifted = lifted_test_pairings(v, cfg_m, r)
    avg_pairs = base_test_pairings(avg, r)
    gaps = {k: abs(avg_pairs[k] - base_pairs[k]) for k in ("c", "d")}

    slack = cfg.eigen_rtol * hi
    checks = {
        "matrix_identity": bool(identity_ok),
        "det_pm1": det in (1, -1),
        "probability": bool((v >= 0).all() and abs(v.sum() - 1) <= 1e-12),
        "column_sum_bounds": bool(lo > 1 and lo - slack <= lam_n <= hi + slack),
        "lifted_pairing_consistent": all(
            math.isclose(lifted[k], avg_pairs[k], rel_tol=1e-9, abs_tol=1e-12) for k in ("c", "d")
        ),
    }
    return MRecord(
        m=m,
        lambda_m=lam,
        lambda_m_pow_n=lam_n,
        boundary_entries=boundary,
        epsilon_residual=[float(x) for x in eps],
        avg_vector=[float(x) for x in avg],
        avg_gap=float(np.abs(avg - base_vec).sum()),
        pairing_gaps=gaps,
        column_sum_bounds=[lo, hi],
        perron_residual=pd.residual,
        perron_iterations=pd.iterations,
        checks=checks,
        vector=v,
    )


def _bounds(M):
    sums = M.column_sums()
    return min(sums), max(sums)


def _observations(cfg: SweepConfig, records, base_lambda) -> dict:
    target = base_lambda ** (1.0 / cfg.n)
    first, last = records[0], records[-1]
    half = records[len(records) // 2:]

    def nonincreasing(values):
        return all(y <= x for x, y in zip(values, values[1:]))

    return {
        "lambda_target": target,
        "lambda_converging": abs(last.lambda_m - target) < abs(first.lambda_m - target),
        "boundary_decay": max(last.boundary_entries) < max(first.boundary_entries),
        "epsilon_decay": sum(map(abs, last.epsilon_residual)) < sum(map(abs, first.epsilon_residual)),
        "avg_gap_monotone_last_half": nonincreasing([r.avg_gap for r in half]),
        "pairing_gap_monotone_last_half": nonincreasing(
            [max(r.pairing_gaps.values()) for r in half]
        ),
    }


def run_sweep(cfg: SweepConfig) -> ConvergenceReport:
    base_M, base_pd = base_perron(cfg)
    base_vec = base_pd.vector
    base_pairs = base_test_pairings(base_vec, cfg.r)
    args = (base_M, base_vec, base_pairs)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_sweep_one, cfg, m, *args) for m in cfg.m_range]
            records = [f.result() for f in futures]
    else:
        records = [_sweep_one(cfg, m, *args) for m in cfg.m_range]
    return ConvergenceReport(
        config=asdict(cfg),
        base_lambda=base_pd.root,
        base_vector=[float(x) for x in base_vec],
        base_pairings=base_pairs,
        records=records,
        observations=_observations(cfg, records, base_pd.root),
    )


def stable_side_sweep(cfg: SweepConfig) -> ConvergenceReport:
    if cfg.side != "stable":
        raise ConfigError("stable_side_sweep needs side='stable'")
    return run_sweep(cfg)


def reference_epsilon(boundary, rN: int) -> np.ndarray:
    """Reference closed form for the residual in terms of (a_m, a_{m+1}, b_m, b_{m+1})."""
    a_m, a_m1, b_m, b_m1 = boundary
    q = rN
    return np.array([
        q**2 * (a_m + a_m1),
        -(q**2) * b_m1 + q**3 * a_m + (q**2 - q + 1) * a_m1 + q**4 * b_m,
    ])


def derived_epsilon(boundary, rN: int) -> np.ndarray:
    """Residual of the averaged vector worked out from the reconstructed matrices.

    Only the block boundary between c_m/d_m and c_{m+1}/d_{m+1} differs from the
    full lift, and in the carrying orientation only a_{m+1}, b_m, b_{m+1} enter.
    """
    _, a_m1, b_m, b_m1 = boundary
    q = rN
    return np.array([
        2 * q**2 * a_m1 + 2 * q**3 * b_m1,
        2 * q**3 * a_m1 - 2 * q**2 * b_m + 2 * q**4 * b_m1,
    ])


def defect_functional(cfg_m: NecklaceConfig, r: int, N: int, stable: bool = False):
    """Exact 2 x 2K integer matrix E with epsilon = E @ upsilon.

    Sums the c- and d-blocks of (M_Psi^n - M_lift)^T; the averaged lift matrix
    commutes with block summation, which is what makes this the residual.
    """
    K = cfg_m.K
    root = necklace_root_matrix(cfg_m, r, N, stable=stable)
    lift = lifted_full_matrix(cfg_m, r, N)
    if stable:
        from .twist_algebra import inverse_word, lifted_word

        lift = compose(inverse_word(lifted_word(cfg_m, N)), necklace_incidence(cfg_m, r))
    diff = (root ** (cfg_m.m * cfg_m.n) - lift).T
    E = np.zeros((2, 2 * K), dtype=object)
    for i, j, val in diff.items():
        E[0 if i < K else 1, j] += val
    return E


def epsilon_formula_check(report: ConvergenceReport, cfg: SweepConfig, formula=reference_epsilon,
                          atol: Optional[float] = None) -> dict:
    """Per m, whether the measured residual matches ``formula`` within ``atol``."""
    atol = cfg.eps_atol if atol is None else atol
    q = cfg.r * cfg.N
    out = {}
    for rec in report.records:
        predicted = formula(rec.boundary_entries, q)
        out[rec.m] = bool(np.abs(np.asarray(rec.epsilon_residual) - predicted).max() <= atol)
    return out


@dataclass
class OrbitResult:
    m: int
    holds: bool
    max_rel_error: float
    xi: float


def orbit_errors(vector, xi: float, cfg_m: NecklaceConfig) -> float:
    """max over i = 2..mn of |a_{m+im} - xi^{i-1} a_{2m}| / (xi^{i-1} a_{2m})."""
    m, K = cfg_m.m, cfg_m.K
    a = vector[:K]
    base = a[2 * m - 1]
    if not base > 0:
        return math.inf
    worst = 0.0
    for i in range(2, m * cfg_m.n + 1):
        expected = xi ** (i - 1) * base
        idx = (m + i * m - 1) % K
        worst = max(worst, abs(a[idx] - expected) / expected)
    return worst


def geometric_orbit_check(cfg: SweepConfig, with_chi: bool = True) -> list:
    """Check a_{m+im} = xi_m^{i-1} a_{2m} on the Perron vector of the root matrix."""
    results = []
    for m in cfg.m_range:
        cfg_m = NecklaceConfig(m, cfg.n)
        if with_chi:
            M = necklace_root_matrix(cfg_m, cfg.r, cfg.N)
        else:
            word = [x for x in root_word(cfg_m, cfg.N) if not isinstance(x, Chi)]
            M = compose(word, necklace_incidence(cfg_m, cfg.r))
        pd = perron(M.T, tol=cfg.tol, max_iter=ROOT_MAX_ITER)
        err = orbit_errors(pd.vector, pd.root, cfg_m)
        results.append(OrbitResult(m, bool(err <= cfg.eigen_rtol), float(err), pd.root))
    return results
