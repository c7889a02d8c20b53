"""Analysis of symmetric operators on a truncated scale space.

The pipeline certifies, at finite truncation, the constructive facts
behind fractal scale structures: a symmetric operator has coinciding
kernel and cokernel, its resolvent at an off-axis point is normal, its
spectral decomposition is real and orthonormal, and the weight
1 + gamma^2 built from its eigenvalues turns the graph-norm ladder into
a weighted sequence model. The final product of the module is
:func:`build_fractal_structure`, which assembles the ladder, rescales
the eigenbasis grade by grade, and reports the isometry defect onto the
diagonal model.

Complex arithmetic appears only inside resolvent computations; every
other result is real.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import linalg
from .spaces import (
    GramGrade,
    TruncatedScaleSpace,
    gram_matrix,
    space_from_json,
    space_to_json,
    weighted_sequence_space,
)
from .weights import Weight

__all__ = [
    "DEFAULT_RESOLVENT_POINT",
    "ScaleOperator",
    "SpectrumError",
    "SymmetryReport",
    "KernelReport",
    "SpectralData",
    "FractalWeight",
    "ResolventData",
    "FractalStructure",
    "check_symmetry",
    "check_kernel_cokernel",
    "regularity_constant",
    "graph_inner_product",
    "graph_gram",
    "graph_ladder",
    "graph_equivalence_constants",
    "resolvent",
    "normality_defect",
    "spectral_decompose",
    "resolvent_consistency",
    "fractal_weight",
    "rescaled_basis",
    "build_fractal_structure",
    "restriction_invariance",
    "pair_isometry_certificate",
    "conjugated_diagonal",
    "operator_from_json",
    "operator_to_json",
]

# Purely imaginary points are never eigenvalues of a symmetric operator,
# so the unit imaginary point is an unconditionally safe default.
DEFAULT_RESOLVENT_POINT = 1j


class SpectrumError(ValueError):
    """The requested resolvent point is on (or too close to) the spectrum."""


@dataclass(frozen=True, eq=False)
class ScaleOperator:
    """A real square matrix acting on a truncated scale space.

    The matrix holds the operator in grade-0 orthonormal coordinates.
    ``scale`` supplies the ambient ladder; ``None`` selects the graph
    default, where grade k + 1 is built from grade k through the
    operator itself.
    """

    matrix: np.ndarray
    scale: TruncatedScaleSpace | None = None

    def __post_init__(self):
        m = linalg.as_square_matrix(self.matrix, "operator matrix")
        if np.iscomplexobj(m):
            raise ValueError("operator matrix must be real")
        if not np.isfinite(m).all():
            raise ValueError("operator matrix must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if self.scale is not None and self.scale.n != self.n:
            raise ValueError(
                f"scale dimension {self.scale.n} does not match operator dimension {self.n}"
            )

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SymmetryReport:
    defect: float
    tol: float
    passed: bool


@dataclass(frozen=True)
class KernelReport:
    ker_dim: int
    coker_dim: int
    subspace_angle: float

    @property
    def index(self) -> int:
        return self.ker_dim - self.coker_dim


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Eigenvalues and orthonormal eigenvectors of a symmetric operator.

    ``gammas[i]`` belongs to column i of ``vectors``. ``order`` is the
    permutation that lists the pairs by nondecreasing absolute
    eigenvalue (ties: signed value, then position).
    """

    gammas: np.ndarray
    vectors: np.ndarray
    order: np.ndarray

    def __post_init__(self):
        for name in ("gammas", "vectors", "order"):
            a = np.array(getattr(self, name))
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def n(self) -> int:
        return self.gammas.shape[0]

    def sorted_gammas(self) -> np.ndarray:
        return self.gammas[self.order]

    def sorted_vectors(self) -> np.ndarray:
        return self.vectors[:, self.order]


@dataclass(frozen=True, eq=False)
class FractalWeight(Weight):
    """The weight 1 + gamma^2 in absolute-eigenvalue order.

    Entries are >= 1 and nondecreasing, so this is a valid scale weight;
    the eigenvalues it came from ride along in ``gammas_sorted``.
    """

    gammas_sorted: np.ndarray | None = field(default=None)

    def __post_init__(self):
        super().__post_init__()
        if self.gammas_sorted is not None:
            g = np.array(self.gammas_sorted, dtype=float)
            g.setflags(write=False)
            object.__setattr__(self, "gammas_sorted", g)


@dataclass(frozen=True, eq=False)
class ResolventData:
    """The inverse of (operator - point * identity) at an off-spectrum point."""

    point: complex
    b_matrix: np.ndarray
    residual: float
    operator_matrix: np.ndarray

    def __post_init__(self):
        b = np.array(self.b_matrix, dtype=complex)
        b.setflags(write=False)
        object.__setattr__(self, "b_matrix", b)
        a = np.array(self.operator_matrix, dtype=float)
        a.setflags(write=False)
        object.__setattr__(self, "operator_matrix", a)


def check_symmetry(op: ScaleOperator, tol: float = 1e-10) -> SymmetryReport:
    """Asymmetry of the operator matrix, in relative Frobenius norm.

    The antisymmetric part is measured against the symmetric part, so a
    strictly triangular matrix scores exactly 1 and a symmetric one 0.
    """
    a = op.matrix
    num = linalg.frobenius(a - a.T)
    den = linalg.frobenius(a + a.T)
    if den == 0.0:
        defect = 0.0 if num == 0.0 else float("inf")
    else:
        defect = num / den
    return SymmetryReport(defect=float(defect), tol=float(tol), passed=defect <= tol)


def check_kernel_cokernel(op: ScaleOperator, rank_tol: float | None = None) -> KernelReport:
    """Kernel and cokernel data from a singular value decomposition.

    Dimensions count singular values at or below rank_tol times the
    largest one (default n * machine epsilon). The reported angle is the
    largest principal angle between the kernel and the orthogonal
    complement of the range; for a symmetric operator the two subspaces
    coincide and the angle vanishes. The index ker_dim - coker_dim is 0
    for every square matrix, which is the truncated Fredholm statement.
    """
    u, s, vt = np.linalg.svd(op.matrix)
    if rank_tol is None:
        rank_tol = op.n * linalg.EPS
    cutoff = rank_tol * (float(s[0]) if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    kernel = vt[rank:].T
    range_perp = u[:, rank:]
    angles = linalg.principal_angles(kernel, range_perp)
    angle = float(np.max(angles)) if angles.size else 0.0
    return KernelReport(ker_dim=op.n - rank, coker_dim=op.n - rank, subspace_angle=angle)


def graph_gram(op: ScaleOperator) -> np.ndarray:
    """Gram matrix of the graph inner product, identity + A^T A, symmetrized."""
    a = op.matrix
    return linalg.sym_part(np.eye(op.n) + a.T @ a)


def graph_ladder(matrix: np.ndarray, k_max: int) -> list[np.ndarray]:
    """Grams of the graph-norm ladder: G_0 = identity and
    G_{k+1} = G_k + A^T G_k A, symmetrized at every step."""
    a = linalg.as_square_matrix(matrix, "operator matrix")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    grams = [np.eye(a.shape[0])]
    for _ in range(k_max):
        g = grams[-1]
        grams.append(linalg.sym_part(g + a.T @ g @ a))
    return grams


def _grade_grams(op: ScaleOperator, k: int) -> list[np.ndarray]:
    """Grams of grades 0..k of the ambient scale (graph ladder if none)."""
    if op.scale is None:
        return graph_ladder(op.matrix, k)
    if k > op.scale.k_max:
        raise IndexError(f"scale is missing grade {k} (has 0..{op.scale.k_max})")
    return [gram_matrix(op.scale, j) for j in range(k + 1)]


def regularity_constant(op: ScaleOperator, n_grade: int) -> float:
    """Best constant C with ||x||_{n+1} <= C sqrt(||Ax||_n^2 + ||x||_n^2).

    The quadratic right-hand side is norm equivalent to the literal
    (||Ax||_n + ||x||_n) within a factor sqrt(2), so C certifies the
    truncated regularity property up to that documented slack. Computed
    as the square root of the largest generalized eigenvalue between the
    grade-(n+1) Gram and the right-hand side form.
    """
    if n_grade < 0:
        raise IndexError("grade must be >= 0")
    grams = _grade_grams(op, n_grade + 1)
    g_n, g_next = grams[n_grade], grams[n_grade + 1]
    a = op.matrix
    rhs = linalg.sym_part(g_n + a.T @ g_n @ a)
    _, mu_hi = linalg.extreme_generalized_eigenvalues(g_next, rhs)
    return float(np.sqrt(mu_hi))


def graph_inner_product(op: ScaleOperator, xi, eta) -> float:
    """<xi, eta> + <A xi, A eta> in grade-0 coordinates."""
    x = np.asarray(getattr(xi, "coords", xi), dtype=float).reshape(-1)
    y = np.asarray(getattr(eta, "coords", eta), dtype=float).reshape(-1)
    if x.shape != (op.n,) or y.shape != (op.n,):
        raise ValueError(
            f"vector dimensions {x.shape[0]}, {y.shape[0]} do not match operator dimension {op.n}"
        )
    a = op.matrix
    return float(x @ y + (a @ x) @ (a @ y))


def graph_equivalence_constants(
    op: ScaleOperator,
    point: complex = DEFAULT_RESOLVENT_POINT,
) -> tuple[float, float, float]:
    """(c_lo, c_hi, c_step1) between the grade-1 norm and the graph norm.

    c_lo and c_hi are the attained extreme generalized eigenvalues of the
    grade-1 Gram against the graph Gram, so
    c_lo ||x||_graph^2 <= ||x||_1^2 <= c_hi ||x||_graph^2 with equality
    somewhere. c_step1 is the constructive bound max(c0, |point| * c0),
    with c0 the operator norm of the resolvent at ``point`` as a map
    into grade 1; it is reported for comparison and only finiteness is
    contractual. With the graph-default scale both exact constants
    are 1.
    """
    grams = _grade_grams(op, 1)
    g_one = grams[1]
    g_graph = graph_gram(op)
    c_lo, c_hi = linalg.extreme_generalized_eigenvalues(g_one, g_graph)
    r = resolvent(op, point)
    chol = linalg.cholesky_spd(g_one, "grade 1 Gram")
    c_zero = float(np.linalg.norm(chol.T @ r.b_matrix, 2))
    c_step1 = max(c_zero, abs(point) * c_zero)
    return float(c_lo), float(c_hi), float(c_step1)


def resolvent(
    op: ScaleOperator,
    point: complex = DEFAULT_RESOLVENT_POINT,
    require_off_axis: bool = True,
) -> ResolventData:
    """Invert (operator - point * identity) at a point off the spectrum.

    Real points are rejected by default: off the real axis the inverse
    exists unconditionally for symmetric operators. Points within the
    numerical-rank tolerance of the spectrum raise :class:`SpectrumError`.
    """
    point = complex(point)
    if require_off_axis and point.imag == 0.0:
        raise ValueError(
            "resolvent point must lie off the real axis (pass require_off_axis=False to override)"
        )
    shifted = op.matrix - point * np.eye(op.n)
    s = np.linalg.svd(shifted, compute_uv=False)
    if s[-1] <= op.n * linalg.EPS * s[0]:
        raise SpectrumError(f"resolvent point on spectrum: {point}")
    b = np.linalg.solve(shifted, np.eye(op.n, dtype=complex))
    residual = linalg.frobenius(shifted @ b - np.eye(op.n))
    return ResolventData(point=point, b_matrix=b, residual=residual, operator_matrix=op.matrix)


def normality_defect(r: ResolventData) -> tuple[float, float]:
    """(commutator defect, adjoint defect) of a resolvent.

    The commutator defect ||B*B - BB*||_F / ||B||_F^2 vanishes exactly
    when B is normal. The adjoint defect compares B* against the
    resolvent at the conjugate point, recomputed by an independent
    solve; both are zero in exact arithmetic when the operator is
    symmetric.
    """
    b = r.b_matrix
    bh = b.conj().T
    norm_b = linalg.frobenius(b)
    commutator = linalg.frobenius(bh @ b - b @ bh) / norm_b**2
    n = b.shape[0]
    shifted = r.operator_matrix - np.conj(r.point) * np.eye(n)
    b_conj = np.linalg.solve(shifted, np.eye(n, dtype=complex))
    adjoint = linalg.frobenius(bh - b_conj) / norm_b
    return float(commutator), float(adjoint)


def spectral_decompose(op: ScaleOperator, tol: float = 1e-10, verify: bool = True) -> SpectralData:
    """Orthonormal eigendecomposition with a deterministic presentation.

    Columns are sign-fixed (largest-magnitude entry positive) and listed
    by their dominant coordinate, so a diagonal matrix decomposes into
    the standard basis in the original coordinate order. The returned
    permutation ``order`` re-lists the pairs by nondecreasing |gamma|.

    With ``verify`` set, the orthonormality and reconstruction residuals
    are checked, and the eigenvalues are cross-checked against an
    independent resolvent eigenproblem (gamma = 1/mu + point); a failure
    raises ArithmeticError. Symmetry failures raise ValueError.
    """
    report = check_symmetry(op, tol)
    if not report.passed:
        raise ValueError(
            f"operator is not symmetric: defect {report.defect:.3e} exceeds tol {tol:.3e}"
        )
    a = linalg.sym_part(op.matrix)
    w, v = np.linalg.eigh(a)
    n = op.n
    dominant = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[dominant, np.arange(n)])
    signs[signs == 0] = 1.0
    v = v * signs
    presentation = np.lexsort((np.arange(n), w, dominant))
    w = w[presentation]
    v = v[:, presentation]
    order = np.lexsort((np.arange(n), w, np.abs(w)))
    data = SpectralData(gammas=w, vectors=v, order=order)
    if verify:
        ortho = linalg.frobenius(v.T @ v - np.eye(n))
        if ortho > max(tol, 1e3 * n * linalg.EPS):
            raise ArithmeticError(f"eigenvector basis lost orthonormality: defect {ortho:.3e}")
        recon = linalg.frobenius(op.matrix - v @ np.diag(w) @ v.T)
        if recon > tol * max(linalg.frobenius(op.matrix), 1.0):
            raise ArithmeticError(f"spectral reconstruction residual {recon:.3e} exceeds tol")
        dev = resolvent_consistency(op, data)
        if dev > 1e-8:
            raise ArithmeticError(f"resolvent eigenvalue consistency failed: deviation {dev:.3e}")
    return data


def resolvent_consistency(
    op: ScaleOperator,
    data: SpectralData,
    point: complex = DEFAULT_RESOLVENT_POINT,
) -> float:
    """Largest relative mismatch between eigenvalues and 1/mu + point.

    mu runs over the eigenvalues of the resolvent at ``point``, matched
    to the operator's eigenpairs by maximal eigenvector overlap (solved
    as an assignment problem). Deviations are relative to 1 + |gamma|.
    """
    r = resolvent(op, point)
    mu, u = np.linalg.eig(r.b_matrix)
    overlap = np.abs(data.vectors.T @ u)
    _, cols = linear_sum_assignment(-overlap)
    reconstructed = 1.0 / mu[cols] + point
    dev = np.abs(data.gammas - reconstructed) / (1.0 + np.abs(data.gammas))
    return float(dev.max())


def fractal_weight(data: SpectralData) -> FractalWeight:
    """The weight 1 + gamma^2, listed in |gamma|-sorted order.

    Stored in log scale so huge eigenvalues stay finite: above |gamma| = 1
    the log is taken as 2 log|gamma| + log1p(gamma^-2), which never forms
    gamma^2 and so survives even |gamma| past the square-root of the
    double-precision range. Nondecreasing because the sort is by |gamma|.
    """
    g = data.sorted_gammas()
    abs_g = np.abs(g)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        big = 2.0 * np.log(abs_g) + np.log1p(abs_g**-2.0)
        logs = np.where(abs_g > 1.0, big, np.log1p(g * g))
    return FractalWeight(
        logs,
        growth_note="1 + gamma^2, |gamma| nondecreasing",
        gammas_sorted=g,
    )


def rescaled_basis(data: SpectralData, fw: FractalWeight, k: int) -> np.ndarray:
    """Eigenvectors in |gamma| order, column nu scaled by weight^(-k/2).

    The scaling happens in the log domain, so high grades of rapidly
    growing weights do not underflow prematurely.
    """
    if k < 0:
        raise ValueError("grade must be >= 0")
    factors = np.exp(-0.5 * k * fw.log_values)
    return data.sorted_vectors() * factors


@dataclass(frozen=True, eq=False)
class FractalStructure:
    """Graph-norm ladder of an operator plus its diagonal model.

    ``mapping`` sends grade-0 coordinates to the diagonal model's
    coordinates (the analysis map onto the sorted eigenbasis).
    ``deviations[k]`` is the Frobenius distance from identity of the
    grade-k Gram of the rescaled basis; small deviations certify that
    the ladder is scale isometric to the weighted sequence model.
    """

    space: TruncatedScaleSpace
    target: TruncatedScaleSpace
    weight: FractalWeight
    spectral: SpectralData
    mapping: np.ndarray
    deviations: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.deviations) <= self.tol


def build_fractal_structure(op: ScaleOperator, k_max: int, tol: float = 1e-8) -> FractalStructure:
    """Assemble the graph-norm ladder and certify its diagonal model.

    Grade k + 1 is grade k plus the operator-transported grade k. For
    every grade up to k_max the rescaled eigenbasis is checked to be
    orthonormal; the recorded deviations are the certificate that the
    ladder carries the fractal structure of the weight 1 + gamma^2.
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    data = spectral_decompose(op, tol=max(tol, 1e-10))
    fw = fractal_weight(data)
    grams = graph_ladder(op.matrix, k_max)
    space = TruncatedScaleSpace(op.n, tuple(GramGrade(g) for g in grams))
    target = weighted_sequence_space(fw, k_max)
    deviations = []
    for k, g in enumerate(grams):
        basis = rescaled_basis(data, fw, k)
        deviations.append(linalg.frobenius(basis.T @ g @ basis - np.eye(op.n)))
    return FractalStructure(
        space=space,
        target=target,
        weight=fw,
        spectral=data,
        mapping=data.sorted_vectors().T,
        deviations=tuple(float(d) for d in deviations),
        tol=float(tol),
    )


def restriction_invariance(op: ScaleOperator) -> float:
    """Frobenius distance between the operator's matrix in the graph-
    rescaled basis (graph inner product) and in the plain eigenbasis
    (grade-0 inner product); both equal diag(gamma) in exact arithmetic,
    so the operator and its grade-1 restriction are the same operator.
    """
    data = spectral_decompose(op)
    fw = fractal_weight(data)
    basis = rescaled_basis(data, fw, 1)
    g = graph_gram(op)
    in_graph = basis.T @ g @ (op.matrix @ basis)
    in_flat = np.diag(data.sorted_gammas())
    return linalg.frobenius(in_graph - in_flat)


def pair_isometry_certificate(op: ScaleOperator) -> float:
    """Largest entrywise relative deviation of the eigenbasis graph Gram
    from diag(1 + gamma^2); zero means the eigenbasis carries the pair
    (grade 0, graph norm) isometrically onto the weighted model."""
    data = spectral_decompose(op)
    vs = data.sorted_vectors()
    actual = vs.T @ graph_gram(op) @ vs
    g = data.sorted_gammas()
    expected = np.diag(1.0 + g * g)
    dev = np.abs(actual - expected) / np.maximum(1.0, np.abs(expected))
    return float(dev.max())


def conjugated_diagonal(diag, seed: int, scale=None) -> ScaleOperator:
    """Q^T diag(d) Q for a seeded random orthogonal Q (PCG64 generator)."""
    d = np.asarray(diag, dtype=float).reshape(-1)
    rng = np.random.default_rng(seed)
    q = linalg.random_orthogonal(d.shape[0], rng)
    return ScaleOperator(q.T @ np.diag(d) @ q, scale)


def operator_to_json(op: ScaleOperator) -> dict:
    scale = "graph_default" if op.scale is None else space_to_json(op.scale)
    return {
        "n": op.n,
        "kind": "dense",
        "matrix": [[float(v) for v in row] for row in op.matrix],
        "scale": scale,
    }


def operator_from_json(obj: dict) -> ScaleOperator:
    """Load {"n", "kind": "dense"|"diagonal"|"conjugated_diagonal", ...}.

    Dense operators carry "matrix", diagonal ones "diag", conjugated
    diagonal ones "diag" plus "seed". "scale" is a space object or
    "graph_default".
    """
    n = int(obj["n"])
    kind = obj.get("kind", "dense")
    raw_scale = obj.get("scale", "graph_default")
    scale = None if raw_scale == "graph_default" else space_from_json(raw_scale)
    if kind == "dense":
        matrix = np.asarray(obj["matrix"], dtype=float)
    elif kind == "diagonal":
        matrix = np.diag(np.asarray(obj["diag"], dtype=float))
    elif kind == "conjugated_diagonal":
        op = conjugated_diagonal(obj["diag"], int(obj["seed"]), scale)
        if op.n != n:
            raise ValueError(f"operator has dimension {op.n}, expected n={n}")
        return op
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    if matrix.shape != (n, n):
        raise ValueError(f"operator has shape {matrix.shape}, expected ({n}, {n})")
    return ScaleOperator(matrix, scale)
