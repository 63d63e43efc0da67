"""Poisson brackets, involution/independence checks, and Poisson-map targets.

The source bracket on R^{2n} is the one induced by the skew matrix -Gamma:
{f, g} = (grad f)^T (-Gamma)^-1 grad g.  For quadratic functions x^T M x the
bracket acts on symmetric matrices as {M, N} -> -2(M Gamma^-1 N - N Gamma^-1 M),
which turns involution into a single matrix identity instead of a sampled
statement.

For an admissible pair, the coordinate map x -> (a(x), d(x)) carries a target
symplectic structure calibrated by the constant K = -w^T Gamma^-1 what; the
three reality classes of lambda give three different real target matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    CaseMismatch,
    DegenerateK,
    DimensionMismatch,
    HypothesisViolation,
    NotHamiltonian,
    NotSymmetric,
    ValidationError,
)
from .laxpairs import QuadraticIntegral
from .matrices import ValidatedSystem
from .spectral import AdmissiblePair, LambdaClass


@dataclass(frozen=True)
class PoissonStructure:
    """The matrix W^-1 of a constant Poisson bracket (W skew, nonsingular)."""

    w_inv: np.ndarray
    dim: int

    @classmethod
    def from_w(cls, w) -> "PoissonStructure":
        w = np.asarray(w, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionMismatch(f"W must be square, got {w.shape}")
        if np.abs(w + w.T).max() > 1e-12 * max(1.0, np.abs(w).max()):
            raise ValidationError("W must be skew-symmetric")
        return cls(w_inv=np.linalg.inv(w), dim=w.shape[0])

    @classmethod
    def from_system(cls, sys: ValidatedSystem) -> "PoissonStructure":
        """The bracket of the flow itself: W = -Gamma."""
        return cls(w_inv=-sys.gamma_inv, dim=sys.dim)


def bracket_functions(ps: PoissonStructure, grad_f, grad_g):
    """{f, g} = (grad f)^T W^-1 grad g evaluated on two gradient vectors."""
    grad_f = np.asarray(grad_f)
    grad_g = np.asarray(grad_g)
    if grad_f.shape != (ps.dim,) or grad_g.shape != (ps.dim,):
        raise DimensionMismatch(
            f"gradients must have shape ({ps.dim},), got "
            f"{grad_f.shape} and {grad_g.shape}")
    return grad_f @ ps.w_inv @ grad_g


def hamiltonian_vector_field(ps: PoissonStructure, grad_h):
    """sgrad h = W^-1 grad h; recovers xdot = -Gamma^-1 P x for h = x^T P x / 2."""
    grad_h = np.asarray(grad_h)
    if grad_h.shape != (ps.dim,):
        raise DimensionMismatch(f"grad_h must have shape ({ps.dim},)")
    return ps.w_inv @ grad_h


def _require_symmetric(m, name: str, tol: float = 1e-12) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square")
    if np.abs(m - m.T).max() > tol * max(1.0, np.abs(m).max()):
        raise NotSymmetric(f"{name} is not symmetric")
    return m


def quadratic_bracket(m, n_mat, sys: ValidatedSystem) -> np.ndarray:
    """Bracket of two quadratic forms at matrix level: -2(M G^-1 N - N G^-1 M)."""
    m = _require_symmetric(m, "m")
    n_mat = _require_symmetric(n_mat, "n_mat")
    if m.shape[0] != sys.dim or n_mat.shape[0] != sys.dim:
        raise DimensionMismatch("matrices must match the system dimension")
    g_inv = sys.gamma_inv
    return -2.0 * (m @ g_inv @ n_mat - n_mat @ g_inv @ m)


def involution_check(i1: QuadraticIntegral, i2: QuadraticIntegral,
                     sys: ValidatedSystem) -> float:
    """Normalized sup-norm of the matrix bracket of two integrals.

    Zero means the gradient pairing vanishes identically in x, i.e. the two
    quadratic integrals are in involution.
    """
    br = quadratic_bracket(i1.s, i2.s, sys)
    scale = np.abs(i1.s).max() * np.abs(i2.s).max()
    if scale == 0.0:
        return 0.0
    return float(np.abs(br).max() / scale)


def independence_check(integrals: list[QuadraticIntegral],
                       sample_points, rank_tol: float | None = None) -> int:
    """Min over sample points of the rank of the stacked gradients 2 S_j x."""
    min_rank = None
    for x in sample_points:
        x = np.asarray(x, dtype=complex)
        grads = np.array([itg.gradient(x) for itg in integrals])
        rank = int(np.linalg.matrix_rank(grads, tol=rank_tol))
        min_rank = rank if min_rank is None else min(min_rank, rank)
    return 0 if min_rank is None else min_rank


def gradient_formula_check(pair: AdmissiblePair, sys: ValidatedSystem, x) -> dict:
    """Cross-check grad I = (g1 E - g2 P Gamma^-1) w and its eigenvector property.

    g1 = 4 x.w and g2 = 4 lambda^-2 x.(P Gamma^-1 w); the gradient is always
    an eigenvector of (P Gamma^-1)^2 with eigenvalue lambda^2, which is the
    mechanism behind involution.
    """
    from .laxpairs import integral_of_pair

    x = np.asarray(x, dtype=complex)
    pg = sys.pg.astype(complex)
    s = integral_of_pair(pair).s
    grad_direct = 2.0 * (s @ x)
    g1 = 4.0 * (x @ pair.w)
    g2 = 4.0 / pair.lam ** 2 * (x @ (pg @ pair.w))
    grad_formula = g1 * pair.w - g2 * (pg @ pair.w)
    scale = max(np.linalg.norm(grad_direct), np.linalg.norm(grad_formula), 1e-300)
    formula_resid = float(np.linalg.norm(grad_direct - grad_formula) / scale)
    eig_resid = float(
        np.linalg.norm(pg @ (pg @ grad_direct) - pair.lam ** 2 * grad_direct)
        / max(np.linalg.norm(grad_direct), 1e-300))
    return {"formula_residual": formula_resid, "eigenvector_residual": eig_resid}


def k_constant(pair: AdmissiblePair, sys: ValidatedSystem,
               tol: float = 1e-10) -> complex:
    """K = -w^T Gamma^-1 what, cross-checked against its two equivalent forms.

    Nonzero whenever the pair is admissible and the spectrum is simple;
    it calibrates every target symplectic matrix below.
    """
    g_inv = sys.gamma_inv.astype(complex)
    pg = sys.pg.astype(complex)
    w, w_hat, lam = pair.w, pair.w_hat, pair.lam
    k1 = -complex(w @ g_inv @ w_hat)
    k2 = complex(-1j / lam * (w @ g_inv @ (pg @ w)))
    k3 = complex(-1j * lam * (w @ np.linalg.inv(sys.p) @ w))
    scale = max(abs(k1), abs(k2), abs(k3), 1e-300)
    if abs(k1 - k2) > 1e-10 * scale or abs(k1 - k3) > 1e-10 * scale:
        raise DegenerateK(
            f"the three K formulas disagree: {k1:.6e}, {k2:.6e}, {k3:.6e}")
    if abs(k1) <= tol * float(np.linalg.norm(w)) ** 2 * max(
            1.0, float(np.linalg.norm(g_inv @ pg))):
        raise DegenerateK(f"K = {k1:.3e} is numerically zero")
    return k1


class TargetCase(enum.Enum):
    CASE1_PURE_IMAG = "case1"
    CASE2_REAL = "case2"
    CASE3_COMPLEX = "case3"


_CASE_OF_CLASS = {
    LambdaClass.PURE_IMAGINARY_LAMBDA: TargetCase.CASE1_PURE_IMAG,
    LambdaClass.REAL_LAMBDA: TargetCase.CASE2_REAL,
    LambdaClass.GENUINELY_COMPLEX: TargetCase.CASE3_COMPLEX,
}


@dataclass(frozen=True)
class TargetStructure:
    """Real skew matrix defining the symplectic structure on the image."""

    case: TargetCase
    matrix: np.ndarray      # 2x2 (cases 1-2) or 4x4 (case 3), skew, nonsingular
    k_const: complex

    @property
    def bracket_matrix(self) -> np.ndarray:
        """Matrix of pairwise coordinate brackets = inverse of the symplectic
        matrix (the bracket is defined through W^-1, not W)."""
        return np.linalg.inv(self.matrix)


def _require_real_pair(pair: AdmissiblePair):
    if np.abs(pair.w.imag).max() > 1e-9 * max(1.0, np.abs(pair.w).max()):
        raise CaseMismatch(
            "lambda^2 is real but w is not: required for the Poisson map")


def target_structure(pair: AdmissiblePair, sys: ValidatedSystem,
                     tol: float = 1e-10) -> TargetStructure:
    """Build the target symplectic matrix for the pair's reality class."""
    k = k_constant(pair, sys, tol=tol)
    case = _CASE_OF_CLASS[pair.lambda_sq_class]

    if case is TargetCase.CASE1_PURE_IMAG:
        _require_real_pair(pair)
        if abs(k.imag) > 1e-9 * abs(k):
            raise CaseMismatch(f"case 1 requires real K, got {k:.6e}")
        inv_k = 1.0 / k.real
        matrix = np.array([[0.0, -inv_k], [inv_k, 0.0]])
    elif case is TargetCase.CASE2_REAL:
        _require_real_pair(pair)
        if abs(k.real) > 1e-9 * abs(k):
            raise CaseMismatch(f"case 2 requires purely imaginary K, got {k:.6e}")
        c = (1j / k).real   # i K^-1 is real here
        matrix = np.array([[0.0, -c], [c, 0.0]])
    else:
        r = 0.5 * np.array([[k.real, k.imag], [k.imag, -k.real]])
        det_r = float(np.linalg.det(r))
        expected = -0.25 * abs(k) ** 2
        if abs(det_r - expected) > 1e-10 * max(abs(expected), 1e-300):
            raise DegenerateK(
                f"det R = {det_r:.6e} differs from -|K|^2/4 = {expected:.6e}")
        if abs(det_r) <= tol:
            raise DegenerateK("R is singular")
        y = np.zeros((4, 4))
        y[:2, 2:] = r
        y[2:, :2] = -r
        matrix = np.linalg.inv(y)
    return TargetStructure(case=case, matrix=matrix, k_const=k)


def pullback_covectors(pair: AdmissiblePair) -> list[np.ndarray]:
    """Real covectors of the coordinate pullbacks, per reality case.

    Case 1: (w, what); case 2: (w, i^-1 what); case 3 splits w = w1 + i w2
    and what = what1 + i what2 into (w1, w2, what1, what2).
    """
    case = _CASE_OF_CLASS[pair.lambda_sq_class]
    if case is TargetCase.CASE1_PURE_IMAG:
        _require_real_pair(pair)
        return [pair.w.real.copy(), pair.w_hat.real.copy()]
    if case is TargetCase.CASE2_REAL:
        _require_real_pair(pair)
        return [pair.w.real.copy(), (pair.w_hat / 1j).real.copy()]
    return [pair.w.real.copy(), pair.w.imag.copy(),
            pair.w_hat.real.copy(), pair.w_hat.imag.copy()]


def poisson_map_check(pair: AdmissiblePair, sys: ValidatedSystem,
                      ts: TargetStructure, trials: int = 0,
                      rng: np.random.Generator | None = None) -> float:
    """Max residual between source brackets of the pullbacks and the target.

    The pullbacks are linear, so their pairwise brackets are constants; the
    whole table must match the inverse of the target symplectic matrix.
    Optional trials draw random linear combinations of the coordinates and
    re-check the bracket bilinearly.
    """
    covs = pullback_covectors(pair)
    m = len(covs)
    if ts.matrix.shape[0] != m:
        raise CaseMismatch(
            f"target structure is {ts.matrix.shape[0]}-dimensional but the "
            f"pair produces {m} coordinates")
    u = np.array(covs)                       # (m, 2n)
    source = -(u @ sys.gamma_inv @ u.T)      # {z_i, z_j} with W = -Gamma
    target = ts.bracket_matrix
    resid = float(np.abs(source - target).max())
    if trials and rng is not None:
        ps = PoissonStructure.from_system(sys)
        for _ in range(trials):
            a = rng.normal(size=m)
            b = rng.normal(size=m)
            lhs = bracket_functions(ps, a @ u, b @ u)
            rhs = a @ target @ b
            resid = max(resid, float(abs(lhs - rhs)))
    return resid


def _dynamics_matrix(ts: TargetStructure, lam: complex) -> np.ndarray:
    """Matrix C with zdot = C z for the pushed-forward coordinate system."""
    lam = complex(lam)
    if ts.case is TargetCase.CASE1_PURE_IMAG:
        return np.array([[0.0, -1j * lam], [1j * lam, 0.0]])
    if ts.case is TargetCase.CASE2_REAL:
        return np.array([[0.0, lam], [lam, 0.0]], dtype=complex)
    a1, a2 = lam.real, lam.imag
    f = np.array([[a2, a1], [-a1, a2]])
    c = np.zeros((4, 4))
    c[:2, 2:] = f
    c[2:, :2] = -f
    return c.astype(complex)


def pushforward_hamiltonian_check(pair: AdmissiblePair, ts: TargetStructure,
                                  tol: float = 1e-9) -> dict:
    """Verify the pushed-forward system is Hamiltonian for the target structure.

    Writing zdot = C z, the matrix S = ts.matrix @ C must be real symmetric
    (then H = z^T S z / 2 is the Hamiltonian).  Cases 1-2 additionally pin S:
    a real scalar matrix -i lam K^-1 E in case 1 (so i lam K^-1 must be real),
    the real diagonal (-i lam K^-1, i lam K^-1) in case 2.  Case 3 gives the
    block-diagonal Q = Y^-1 C = [[M, 0], [0, M]] with M symmetric traceless
    and det M != 0.
    """
    k = ts.k_const
    lam = pair.lam
    c_dyn = _dynamics_matrix(ts, lam)
    s = ts.matrix @ c_dyn
    report: dict = {"case": ts.case.value}

    im_resid = float(np.abs(np.asarray(s).imag).max())
    scale = max(1.0, float(np.abs(s).max()))
    report["imag_residual"] = im_resid
    if im_resid > tol * scale:
        raise NotHamiltonian(f"pushforward matrix is not real: {im_resid:.3e}")
    s = np.asarray(s).real

    sym_resid = float(np.abs(s - s.T).max())
    report["symmetry_residual"] = sym_resid
    if sym_resid > tol * scale:
        raise NotHamiltonian(f"pushforward matrix is not symmetric: {sym_resid:.3e}")

    if ts.case is TargetCase.CASE1_PURE_IMAG:
        sigma = 1j * lam / k
        report["i_lam_over_k"] = complex(sigma)
        if abs(sigma.imag) > tol * max(1.0, abs(sigma)):
            raise NotHamiltonian(f"i lam K^-1 = {sigma:.6e} is not real")
        # the computed scalar: Gamma_{lam,w} zdot = (-i lam K^-1) z
        expected = (-sigma).real * np.eye(2)
        resid = float(np.abs(s - expected).max())
        report["scalar_residual"] = resid
        report["scalar"] = float((-sigma).real)
        if resid > tol * scale:
            raise NotHamiltonian(
                f"pushforward is not the scalar matrix -i lam K^-1 E: {resid:.3e}")
    elif ts.case is TargetCase.CASE2_REAL:
        sigma = 1j * lam / k
        if abs(sigma.imag) > tol * max(1.0, abs(sigma)):
            raise NotHamiltonian(f"i lam K^-1 = {sigma:.6e} is not real")
        expected = np.diag([(-sigma).real, sigma.real])
        resid = float(np.abs(s - expected).max())
        report["diagonal_residual"] = resid
        report["diagonal"] = [float((-sigma).real), float(sigma.real)]
        if resid > tol * scale:
            raise NotHamiltonian(
                f"pushforward is not diag(-i lam/K, i lam/K): {resid:.3e}")
    else:
        m_block = s[:2, :2]
        report["block_equal_residual"] = float(np.abs(s[2:, 2:] - m_block).max())
        report["off_block_norm"] = float(
            max(np.abs(s[:2, 2:]).max(), np.abs(s[2:, :2]).max()))
        report["trace_residual"] = float(abs(np.trace(m_block)))
        report["det_m"] = float(np.linalg.det(m_block))
        if report["block_equal_residual"] > tol * scale or \
                report["off_block_norm"] > tol * scale:
            raise NotHamiltonian("Q is not block diagonal [[M, 0], [0, M]]")
        if report["trace_residual"] > tol * scale:
            raise NotHamiltonian("M is not traceless")
        if abs(report["det_m"]) <= tol:
            raise NotHamiltonian("det M is numerically zero")
    report["ok"] = True
    return report


def product_poisson_check(pairs: list[AdmissiblePair], sys: ValidatedSystem,
                          lam_tol: float = 1e-9) -> dict:
    """Check the product map over several pairs is Poisson.

    Requires lambda_{j1}^2 != lambda_{j2}^2 and != conj(lambda_{j2}^2) for
    j1 != j2.  Cross-pair coordinate brackets must vanish; each diagonal
    block must match the pair's own target structure.
    """
    lams_sq = [p.lam ** 2 for p in pairs]
    scale = max(max(abs(v) for v in lams_sq), 1e-300)
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if abs(lams_sq[i] - lams_sq[j]) <= lam_tol * scale or \
                    abs(lams_sq[i] - np.conj(lams_sq[j])) <= lam_tol * scale:
                raise HypothesisViolation(
                    f"pairs {i}, {j}: lambda^2 values {lams_sq[i]:.6g} and "
                    f"{lams_sq[j]:.6g} clash (equal or conjugate)")

    targets = [target_structure(p, sys) for p in pairs]
    cov_groups = [pullback_covectors(p) for p in pairs]
    all_covs = np.array([c for grp in cov_groups for c in grp])
    bracket = -(all_covs @ sys.gamma_inv @ all_covs.T)

    sizes = [len(g) for g in cov_groups]
    offsets = np.cumsum([0] + sizes)
    cross_max = 0.0
    diag_max = 0.0
    for i in range(len(pairs)):
        si = slice(offsets[i], offsets[i + 1])
        diag_max = max(diag_max, float(
            np.abs(bracket[si, si] - targets[i].bracket_matrix).max()))
        for j in range(len(pairs)):
            if i == j:
                continue
            sj = slice(offsets[j], offsets[j + 1])
            cross_max = max(cross_max, float(np.abs(bracket[si, sj]).max()))
    return {
        "cross_bracket_max": cross_max,
        "diagonal_residual_max": diag_max,
        "cases": [t.case.value for t in targets],
    }
