"""The certificate suite: every acceptance property as a callable check.

Each criterion function runs one property at its pinned tolerance and
returns a :class:`CriterionResult` with the worst observed defect and a
JSON-ready detail dict. :func:`run_verify_all` executes the whole suite,
including the determinism criterion, which reruns the first eight
checks and compares the serialized reports byte for byte.

Randomized instances draw from numpy's default PCG64 generator with
explicit seeds, so a fixed seed fixes every matrix bit for bit. No
result contains timestamps or timings; reports are reproducible.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import linalg
from .hessian import (
    ScaleOperator,
    build_fractal_structure,
    check_kernel_cokernel,
    fractal_weight,
    normality_defect,
    resolvent,
    resolvent_consistency,
    restriction_invariance,
    spectral_decompose,
)
from .sobolev_circle import (
    _log_closed_form_diag,
    fourier_gram_closed_form,
    fourier_gram_quadrature_table,
)

__all__ = [
    "DEFAULT_SEED",
    "CriterionResult",
    "VerifySummary",
    "standard_operator_set",
    "analyze_operator_batch",
    "criterion_sobolev_oracle",
    "criterion_sigma_witness",
    "criterion_kernel_cokernel",
    "criterion_resolvent_normality",
    "criterion_spectral_consistency",
    "criterion_fractal_certificate",
    "criterion_restriction",
    "criterion_roundtrip",
    "run_verify_all",
]

DEFAULT_SEED = 1729

# the documented non-symmetric negative control (strictly triangular)
NEGATIVE_CONTROL = ((0.0, 1.0), (0.0, 0.0))


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    defect: float
    tol: float
    details: dict

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "defect": self.defect,
            "tol": self.tol,
            "details": self.details,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number} {self.name}: {status} (defect {self.defect:.3e}, tol {self.tol:.3e})"


@dataclass(frozen=True)
class VerifySummary:
    seed: int
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_report(self) -> dict:
        return {
            "suite": "scale-hilbert certificates",
            "seed": self.seed,
            "passed": self.passed,
            "criteria": [r.to_dict() for r in self.results],
        }


def standard_operator_set(seed: int = DEFAULT_SEED, count: int = 50) -> list:
    """The seeded batch behind the operator criteria: ``count`` symmetric
    operators with dimensions 16..128, every other one rank-deficient.

    Dense instances are (B + B^T) / (2 sqrt(n)) for standard normal B,
    which keeps spectral radii near 1. Rank-deficient instances conjugate
    a diagonal with a zero block (1 to n/4 zeros, remaining entries of
    magnitude 0.5..2 with random signs) by a seeded orthogonal matrix.
    """
    rng = np.random.default_rng(seed)
    ops = []
    for i in range(count):
        n = int(rng.integers(16, 129))
        if i % 2 == 0:
            b = rng.standard_normal((n, n))
            a = (b + b.T) / (2.0 * np.sqrt(n))
        else:
            ker_dim = int(rng.integers(1, n // 4 + 1))
            d = np.zeros(n)
            d[ker_dim:] = rng.uniform(0.5, 2.0, n - ker_dim) * rng.choice([-1.0, 1.0], n - ker_dim)
            q = linalg.random_orthogonal(n, rng)
            a = q.T @ np.diag(d) @ q
        ops.append(ScaleOperator(a))
    return ops


def analyze_operator_batch(ops) -> list:
    """Run the full diagnostic pipeline over a batch of operators."""
    rows = []
    for op in ops:
        kernel = check_kernel_cokernel(op)
        commutator, adjoint = normality_defect(resolvent(op))
        data = spectral_decompose(op, verify=False)
        consistency = resolvent_consistency(op, data)
        recon = linalg.frobenius(
            op.matrix - data.vectors @ np.diag(data.gammas) @ data.vectors.T
        ) / max(linalg.frobenius(op.matrix), np.finfo(float).tiny)
        rows.append(
            {
                "n": op.n,
                "ker_dim": kernel.ker_dim,
                "index": kernel.index,
                "angle": kernel.subspace_angle,
                "commutator": commutator,
                "adjoint": adjoint,
                "consistency": consistency,
                "reconstruction": recon,
                "restriction": restriction_invariance(op),
            }
        )
    return rows


def _batch(batch, seed):
    if batch is None:
        batch = analyze_operator_batch(standard_operator_set(seed))
    return batch


def criterion_sobolev_oracle(tol: float = 1e-8, nu_max: int = 64, k_max: int = 3) -> CriterionResult:
    """Closed-form Gram entries against the trapezoid oracle.

    Deltas are measured relative to max(1, sqrt(d_nu * d_nu')) with d the
    closed-form diagonal; on the diagonal this is the plain
    max(1, closed_form) scale, and off the diagonal it compares the
    quadrature residue against the size of the two factors (the raw
    integrands reach 1e14, so an absolute 1e-8 is not meaningful there).
    """
    worst = 0.0
    per_grade = []
    for k in range(k_max + 1):
        diag = np.array([fourier_gram_closed_form(nu, nu, k) for nu in range(1, nu_max + 1)])
        closed = np.diag(diag)
        quad = fourier_gram_quadrature_table(nu_max, k)
        scale = np.maximum(1.0, np.sqrt(np.outer(diag, diag)))
        grade_worst = float((np.abs(closed - quad) / scale).max())
        per_grade.append(grade_worst)
        worst = max(worst, grade_worst)
    return CriterionResult(
        number=1,
        name="sobolev-oracle-equivalence",
        passed=worst <= tol,
        defect=worst,
        tol=tol,
        details={"nu_max": nu_max, "k_max": k_max, "worst_scaled_delta_per_grade": per_grade},
    )


def criterion_sigma_witness(nu_max: int = 4096, k_max: int = 3) -> CriterionResult:
    """Per-index ratio between the Sobolev weight and sigma^k.

    Interval membership is evaluated in the log domain; the lower
    endpoint 2^(-k) is attained exactly at the first index, where both
    sides reduce to the identical expression -k * log1p(1). The large
    indices must sit within 1 percent of pi^(2k).
    """
    tail_rtol = 0.01
    tail_from = 1000
    nu = np.arange(1, nu_max + 1, dtype=float)
    log_sigma = np.log1p(nu**2)
    bounds_ok = True
    worst_tail = 0.0
    per_grade = []
    for k in range(k_max + 1):
        log_ratio = _log_closed_form_diag(nu, k) - k * log_sigma
        lo = -k * np.log1p(1.0)
        hi = k * np.log1p(4.0 * np.pi**2)
        inside = bool((log_ratio >= lo).all() and (log_ratio <= hi).all())
        bounds_ok = bounds_ok and inside
        ratio = np.exp(log_ratio)
        limit = np.pi ** (2 * k)
        tail = float(np.max(np.abs(ratio[tail_from - 1 :] - limit)) / limit)
        worst_tail = max(worst_tail, tail)
        per_grade.append(
            {
                "k": k,
                "inside_interval": inside,
                "ratio_min": float(ratio.min()),
                "ratio_max": float(ratio.max()),
                "tail_rel_dev": tail,
            }
        )
    return CriterionResult(
        number=2,
        name="sigma-isomorphism-witness",
        passed=bounds_ok and worst_tail <= tail_rtol,
        defect=worst_tail,
        tol=tail_rtol,
        details={"nu_max": nu_max, "tail_from": tail_from, "per_grade": per_grade},
    )


def criterion_kernel_cokernel(batch=None, seed: int = DEFAULT_SEED, tol: float = 1e-8) -> CriterionResult:
    """Kernel and range-complement coincide (principal angle) with index 0."""
    batch = _batch(batch, seed)
    worst = max(row["angle"] for row in batch)
    indices_zero = all(row["index"] == 0 for row in batch)
    return CriterionResult(
        number=3,
        name="kernel-cokernel-coincidence",
        passed=worst <= tol and indices_zero,
        defect=worst,
        tol=tol,
        details={
            "operators": len(batch),
            "rank_deficient": sum(1 for row in batch if row["ker_dim"] > 0),
            "indices_all_zero": indices_zero,
        },
    )


def criterion_resolvent_normality(batch=None, seed: int = DEFAULT_SEED, tol: float = 1e-10) -> CriterionResult:
    """Resolvents of the batch are normal with the conjugate-point adjoint;
    the non-symmetric control must show a macroscopic commutator."""
    batch = _batch(batch, seed)
    control_floor = 1e-2
    worst = max(max(row["commutator"], row["adjoint"]) for row in batch)
    control, _ = normality_defect(resolvent(ScaleOperator(np.array(NEGATIVE_CONTROL))))
    passed = worst <= tol and control >= control_floor
    return CriterionResult(
        number=4,
        name="resolvent-normality",
        passed=passed,
        defect=worst,
        tol=tol,
        details={
            "operators": len(batch),
            "worst_commutator": max(row["commutator"] for row in batch),
            "worst_adjoint": max(row["adjoint"] for row in batch),
            "negative_control_commutator": control,
            "negative_control_floor": control_floor,
        },
    )


def criterion_spectral_consistency(
    batch=None,
    seed: int = DEFAULT_SEED,
    eig_tol: float = 1e-8,
    recon_tol: float = 1e-10,
) -> CriterionResult:
    """Eigenvalues agree with the resolvent eigenproblem after matching,
    and the eigendecomposition reconstructs the operator."""
    batch = _batch(batch, seed)
    worst_eig = max(row["consistency"] for row in batch)
    worst_recon = max(row["reconstruction"] for row in batch)
    return CriterionResult(
        number=5,
        name="spectral-consistency",
        passed=worst_eig <= eig_tol and worst_recon <= recon_tol,
        defect=worst_eig,
        tol=eig_tol,
        details={
            "operators": len(batch),
            "worst_eigenvalue_dev": worst_eig,
            "worst_reconstruction": worst_recon,
            "reconstruction_tol": recon_tol,
        },
    )


def criterion_fractal_certificate(
    seed: int = DEFAULT_SEED,
    n: int = 64,
    k_max: int = 3,
    tol: float = 1e-8,
) -> CriterionResult:
    """The graph-norm ladder makes the rescaled eigenbases orthonormal."""
    rng = np.random.default_rng([seed, 6])
    b = rng.standard_normal((n, n))
    op = ScaleOperator((b + b.T) / (2.0 * np.sqrt(n)))
    structure = build_fractal_structure(op, k_max, tol=tol)
    worst = max(structure.deviations)
    return CriterionResult(
        number=6,
        name="fractal-certificate",
        passed=worst <= tol,
        defect=worst,
        tol=tol,
        details={"n": n, "k_max": k_max, "gram_deviation_per_grade": list(structure.deviations)},
    )


def criterion_restriction(batch=None, seed: int = DEFAULT_SEED, tol: float = 1e-10) -> CriterionResult:
    """The operator looks identical in the graph-rescaled eigenbasis."""
    batch = _batch(batch, seed)
    worst = max(row["restriction"] for row in batch)
    return CriterionResult(
        number=7,
        name="restriction-invariance",
        passed=worst <= tol,
        defect=worst,
        tol=tol,
        details={"operators": len(batch)},
    )


def criterion_roundtrip(
    seed: int = DEFAULT_SEED,
    count: int = 20,
    n: int = 64,
    tol: float = 1e-12,
) -> CriterionResult:
    """weight -> diag(sqrt(weight - 1)) -> fractal weight recovers the weight.

    Half the weights start at exactly 1, so a zero eigenvalue is always
    exercised. Comparison happens per entry, relative, in the log domain.
    """
    rng = np.random.default_rng([seed, 8])
    worst = 0.0
    for i in range(count):
        logs = np.cumsum(rng.uniform(0.0, 0.4, n))
        if i % 2 == 0:
            logs = logs - logs[0]
        gammas = np.sqrt(np.expm1(logs))
        op = ScaleOperator(np.diag(gammas))
        fw = fractal_weight(spectral_decompose(op))
        rel = np.abs(np.expm1(fw.log_values - logs))
        worst = max(worst, float(rel.max()))
    return CriterionResult(
        number=8,
        name="fractal-weight-roundtrip",
        passed=worst <= tol,
        defect=worst,
        tol=tol,
        details={"weights": count, "n": n},
    )


def _run_core(seed: int, tol: float | None) -> list:
    """Criteria 1 to 8 (everything except determinism), sharing one batch."""
    batch = analyze_operator_batch(standard_operator_set(seed))

    def t(default):
        return default if tol is None else tol

    return [
        criterion_sobolev_oracle(tol=t(1e-8)),
        criterion_sigma_witness(),
        criterion_kernel_cokernel(batch=batch, tol=t(1e-8)),
        criterion_resolvent_normality(batch=batch, tol=t(1e-10)),
        criterion_spectral_consistency(batch=batch, eig_tol=t(1e-8), recon_tol=t(1e-10)),
        criterion_fractal_certificate(seed=seed, tol=t(1e-8)),
        criterion_restriction(batch=batch, tol=t(1e-10)),
        criterion_roundtrip(seed=seed, tol=t(1e-12)),
    ]


def run_verify_all(seed: int = DEFAULT_SEED, tol: float | None = None) -> VerifySummary:
    """All nine criteria. ``tol`` overrides the defect-based tolerances
    (the sigma-witness interval and the negative-control floor stay
    pinned). The determinism criterion reruns the first eight checks and
    compares the serialized reports byte for byte.
    """
    results = _run_core(seed, tol)
    first = json.dumps([r.to_dict() for r in results], indent=2)
    second = json.dumps([r.to_dict() for r in _run_core(seed, tol)], indent=2)
    identical = first == second
    results.append(
        CriterionResult(
            number=9,
            name="determinism",
            passed=identical,
            defect=0.0 if identical else 1.0,
            tol=0.0,
            details={"reruns": 2, "byte_identical": identical, "report_bytes": len(first)},
        )
    )
    return VerifySummary(seed=seed, results=tuple(results))
