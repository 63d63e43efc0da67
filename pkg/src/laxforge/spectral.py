"""Eigenstructure of P Gamma^-1 and admissible-pair selection.

The spectrum of P Gamma^-1 is closed under both negation and conjugation,
every eigenvalue lambda of it yields a subspace
V_lambda = ker((P Gamma^-1)^2 - lambda^2 E) of dimension >= 2, and picking
w in V_lambda that is *not* an eigenvector of P Gamma^-1 is what makes the
downstream quadratic integrals nonzero.  This module computes and checks
all of that.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    EigenvectorDegenerate,
    NoConvergence,
    SelectionFailure,
    SymmetryViolation,
    ValidationError,
)
from .matrices import MAX_DIM, ValidatedSystem

CLASS_BOUNDARY_TOL = 1e-9


class LambdaClass(enum.Enum):
    """Reality class of lambda, deciding which target structure applies."""

    PURE_IMAGINARY_LAMBDA = "pure_imaginary"   # lambda in i*R  (lambda^2 < 0)
    REAL_LAMBDA = "real"                       # lambda in R    (lambda^2 > 0)
    GENUINELY_COMPLEX = "complex"              # lambda^2 not real


def classify_lambda(lam: complex, tol: float = CLASS_BOUNDARY_TOL) -> LambdaClass:
    lam = complex(lam)
    scale = abs(lam)
    if scale == 0.0:
        raise ValidationError("lambda must be nonzero (det P != 0 forbids 0)")
    if abs(lam.real) < tol * scale:
        return LambdaClass.PURE_IMAGINARY_LAMBDA
    if abs(lam.imag) < tol * scale:
        return LambdaClass.REAL_LAMBDA
    return LambdaClass.GENUINELY_COMPLEX


@dataclass(frozen=True)
class SpectralData:
    """Full eigen decomposition with per-pair residuals."""

    eigenvalues: np.ndarray      # (d,) complex, with multiplicity
    eigenvectors: np.ndarray     # (d, d) complex, unit columns
    residuals: np.ndarray        # (d,) real, ||M v - lam v||
    matrix_norm: float

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))


def eigen_decompose(m, tol: float = 1e-8) -> SpectralData:
    """Eigenvalues and unit eigenvectors of a small dense matrix.

    Backed by LAPACK (Hessenberg reduction + shifted QR); residuals are
    computed explicitly and a decomposition whose residuals exceed
    tol * ||m|| is rejected rather than silently returned.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionMismatch(f"dimension {a.shape[0]} exceeds {MAX_DIM}")
    try:
        vals, vecs = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"eigenvalue iteration failed: {exc}") from exc
    norms = np.linalg.norm(vecs, axis=0)
    vecs = vecs / norms
    residuals = np.linalg.norm(a @ vecs - vecs * vals, axis=0)
    m_norm = float(np.linalg.norm(a, 2))
    data = SpectralData(eigenvalues=vals, eigenvectors=vecs,
                        residuals=residuals, matrix_norm=m_norm)
    if np.any(residuals > tol * max(m_norm, 1.0)):
        raise NoConvergence(
            f"max eigen residual {residuals.max():.3e} exceeds "
            f"{tol:g} * ||m||", partial=data)
    return data


def _matched_distance(vals: np.ndarray, targets: np.ndarray) -> float:
    """Min-cost perfect matching distance between two equal multisets."""
    cost = np.abs(vals[:, None] - targets[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def quadruple_symmetry_check(s: SpectralData, pairing_tol: float = 1e-6) -> dict:
    """Confirm the spectrum is closed under lambda -> -lambda and conjugation.

    For each eigenvalue the partners conj(lam), -lam, -conj(lam) must match
    some eigenvalue within pairing_tol (scaled by the spectral radius).
    Raises SymmetryViolation when a partner is missing, which signals
    numerical failure or an invalid input matrix.
    """
    vals = s.eigenvalues
    scale = max(1.0, s.spectral_radius)
    report = {"pairing_tol": pairing_tol}
    for name, mapped in [("conjugation", np.conj(vals)),
                         ("negation", -vals),
                         ("negated_conjugation", -np.conj(vals))]:
        d = _matched_distance(vals, mapped)
        report[name] = d
        if d > pairing_tol * scale:
            raise SymmetryViolation(
                f"spectrum not closed under {name}: matching distance "
                f"{d:.3e} > {pairing_tol:g} * {scale:g}")

    # group into orbits {lam, -lam, conj(lam), -conj(lam)} for the report
    used = np.zeros(len(vals), dtype=bool)
    orbits = []
    order = np.lexsort((vals.imag, vals.real))
    for i in order[::-1]:
        if used[i]:
            continue
        lam = vals[i]
        members = [i]
        used[i] = True
        for target in (-lam, np.conj(lam), -np.conj(lam)):
            free = np.flatnonzero(~used)
            if len(free) == 0:
                break
            j = free[np.argmin(np.abs(vals[free] - target))]
            if abs(vals[j] - target) <= pairing_tol * scale:
                members.append(int(j))
                used[j] = True
        orbits.append([complex(vals[k]) for k in members])
    report["orbits"] = orbits
    report["quadruples"] = sum(1 for o in orbits if len(o) == 4)
    report["pairs"] = sum(1 for o in orbits if len(o) == 2)
    return report


def v_lambda_basis(sys: ValidatedSystem, lam: complex, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis (columns) of ker((P Gamma^-1)^2 - lambda^2 E).

    Computed by SVD thresholding.  The theory guarantees dimension >= 2
    (the spectrum pairs lambda with -lambda), so a smaller answer means
    numerical failure and raises DimensionTooSmall.
    """
    lam = complex(lam)
    pg = sys.pg.astype(complex)
    shifted = pg @ pg - lam * lam * np.eye(sys.dim)
    _, sigma, vh = np.linalg.svd(shifted)
    cutoff = tol * max(sigma[0], 1.0)
    null_mask = sigma <= cutoff
    basis = vh[null_mask].conj().T
    if basis.shape[1] < 2:
        raise DimensionTooSmall(
            f"V_lambda for lambda={lam} has numerical dimension "
            f"{basis.shape[1]} < 2 (singular values {sigma})")
    return basis


def hat_vector(sys: ValidatedSystem, lam: complex, w: np.ndarray) -> np.ndarray:
    """The companion vector i lambda^-1 (P Gamma^-1) w."""
    return (1j / complex(lam)) * (sys.pg @ np.asarray(w, dtype=complex))


@dataclass(frozen=True)
class AdmissiblePair:
    """Eigenvalue lambda plus w in V_lambda not an eigenvector of P Gamma^-1.

    what = i lambda^-1 (P Gamma^-1) w is derived; together (w, what) define
    the 2x2 Lax entries a = x.w, d = x.what.  When lambda^2 is real the
    selection path guarantees w is real (stored with exact zero imag).
    """

    lam: complex
    w: np.ndarray
    w_hat: np.ndarray
    lambda_sq_class: LambdaClass

    @property
    def is_real_class(self) -> bool:
        return self.lambda_sq_class is not LambdaClass.GENUINELY_COMPLEX

    def conjugate(self) -> "AdmissiblePair":
        return AdmissiblePair(
            lam=np.conj(self.lam),
            w=np.conj(self.w),
            w_hat=np.conj(self.w_hat),
            lambda_sq_class=self.lambda_sq_class,
        )


def _eigenvector_for(spec: SpectralData, lam: complex) -> np.ndarray:
    idx = int(np.argmin(np.abs(spec.eigenvalues - lam)))
    return spec.eigenvectors[:, idx]


def _not_eigenvector_angle(pg: np.ndarray, w: np.ndarray) -> float:
    """sin of the angle between (P Gamma^-1) w and w; 0 means eigenvector."""
    u = pg @ w
    nu, nw = np.linalg.norm(u), np.linalg.norm(w)
    if nu == 0.0 or nw == 0.0:
        return 0.0
    overlap = abs(np.vdot(w, u)) / (nu * nw)
    return float(np.sqrt(max(0.0, 1.0 - min(1.0, overlap) ** 2)))


def select_admissible_pair(
    sys: ValidatedSystem,
    lam: complex,
    w: np.ndarray | None = None,
    tol: float = 1e-8,
    angle_tol: float = 1e-6,
) -> AdmissiblePair:
    """Build an admissible pair for eigenvalue lambda.

    Default selection takes w = v_plus + v_minus with v_plus, v_minus unit
    eigenvectors for lambda and -lambda, which can never be an eigenvector
    itself.  When lambda^2 is real, w is rotated by the closed-form phase
    of w.w to kill its imaginary part; failure to realize a real w raises
    SelectionFailure (a silently complex w would corrupt the Poisson-map
    constructions downstream).

    An explicit w is only validated, which lets callers reproduce
    hand-picked vectors exactly.
    """
    lam = complex(lam)
    klass = classify_lambda(lam)
    pg = sys.pg.astype(complex)

    if w is None:
        spec = eigen_decompose(pg, tol=tol)
        v_plus = _eigenvector_for(spec, lam)
        v_minus = _eigenvector_for(spec, -lam)
        det2 = abs(np.linalg.det(np.column_stack([v_plus, v_minus]).conj().T
                                 @ np.column_stack([v_plus, v_minus])))
        if det2 < 1e-12:
            raise EigenvectorDegenerate(
                f"eigenvectors for {lam} and {-lam} are numerically parallel")
        w = v_plus + v_minus
        if klass is not LambdaClass.GENUINELY_COMPLEX:
            # phase that minimizes ||Im(e^{i theta} w)||: theta = -arg(w.w)/2
            bilin = complex(w @ w)
            if abs(bilin) > 0.0:
                w = w * np.exp(-0.5j * np.angle(bilin))
            resid = np.linalg.norm(w.imag)
            if resid > 1e-8 * np.linalg.norm(w):
                raise SelectionFailure(
                    f"cannot realize real w for lambda={lam}: residual "
                    f"imaginary norm {resid:.3e}")
            w = w.real.astype(complex)
    else:
        w = np.asarray(w, dtype=complex)
        if w.shape != (sys.dim,):
            raise DimensionMismatch(f"w must have shape ({sys.dim},)")
        sq_resid = np.linalg.norm(pg @ (pg @ w) - lam * lam * w)
        if sq_resid > tol * max(1.0, np.linalg.norm(pg @ pg)) * np.linalg.norm(w):
            raise ValidationError(
                f"w is not in V_lambda: ||(PG^-1)^2 w - lam^2 w|| = {sq_resid:.3e}")
        if klass is not LambdaClass.GENUINELY_COMPLEX and \
                np.linalg.norm(w.imag) > 1e-8 * np.linalg.norm(w):
            raise SelectionFailure(
                f"lambda^2 is real ({klass.name}) but the supplied w is complex")

    if _not_eigenvector_angle(pg, w) <= angle_tol:
        raise EigenvectorDegenerate(
            "w is (numerically) an eigenvector of P Gamma^-1; "
            "the resulting integral would vanish identically")

    w_hat = (1j / lam) * (pg @ w)
    w.setflags(write=False)
    w_hat.setflags(write=False)
    return AdmissiblePair(lam=lam, w=w, w_hat=w_hat, lambda_sq_class=klass)


def orthogonality_check(sys: ValidatedSystem, v1, v2,
                        lam1_sq=None, lam2_sq=None) -> float:
    """|v1^T Gamma^-1 v2|; vanishes for eigenvectors with distinct lambda^2.

    The caller asserts the bound.  With lam1_sq == lam2_sq the claim does
    not apply but the value is still returned.
    """
    v1 = np.asarray(v1, dtype=complex)
    v2 = np.asarray(v2, dtype=complex)
    return float(abs(v1 @ sys.gamma_inv @ v2))


def nondegeneracy_check(sys: ValidatedSystem, v) -> complex:
    """v^T Gamma^-1 (P Gamma^-1 v); nonzero for admissible v (simple spectrum)."""
    v = np.asarray(v, dtype=complex)
    return complex(v @ sys.gamma_inv @ (sys.pg @ v))


def is_simple_spectrum(s: SpectralData, gap_tol: float = 1e-9) -> bool:
    vals = s.eigenvalues
    d = len(vals)
    if d < 2:
        return True
    dist = np.abs(vals[:, None] - vals[None, :])
    dist[np.diag_indices(d)] = np.inf
    return bool(dist.min() > gap_tol * max(s.spectral_radius, 1e-300))
