"""Construction of Lax pairs and their quadratic first integrals.

Every model here is a constant matrix B plus a state-linear matrix map
x -> L(x), stored as one covector of length 2n per matrix entry.  Along
solutions of Gamma xdot = -P x the pair satisfies Ldot = [B, L], so traces
of powers of L are conserved; the quadratic integral attached to an
admissible pair (lambda, w) is

    I(x) = Tr(L(x)^2) = 2((x.w)^2 + (x.what)^2) = x^T s x,
    s = 2 (w w^T + what what^T).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateForm,
    DimensionMismatch,
    DuplicateLambdaSq,
    EigenvectorDegenerate,
    NotConjugateClosed,
    NotConjugatePair,
    RankDeficient,
    SingularRoot,
    ValidationError,
    VectorNotInVLambda,
    VerificationError,
    WrongCount,
)
from .matrices import ValidatedSystem, determinant
from .spectral import AdmissiblePair, LambdaClass

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class LaxPairModel:
    """Constant B plus linear map x -> L(x) given by per-entry covectors."""

    b: np.ndarray          # (k, k) complex
    covectors: np.ndarray  # (k, k, 2n) complex: L(x)[i, j] = covectors[i, j] . x
    kind: str              # DIM2 | SQRT_N1 | BLOCK_DIAG | REAL_FORM

    @property
    def k(self) -> int:
        return self.b.shape[0]

    @property
    def state_dim(self) -> int:
        return self.covectors.shape[2]

    def l_of(self, x) -> np.ndarray:
        x = np.asarray(x)
        return self.covectors @ x.astype(complex)

    def commutator(self, x) -> np.ndarray:
        l = self.l_of(x)
        return self.b @ l - l @ self.b

    def lax_residual(self, sys: ValidatedSystem, x) -> float:
        """||L(xdot) - [B, L(x)]|| with the exact xdot = -Gamma^-1 P x."""
        xdot = sys.flow_matrix @ np.asarray(x, dtype=float)
        return float(np.linalg.norm(self.l_of(xdot) - self.commutator(x)))


@dataclass(frozen=True)
class QuadraticIntegral:
    """Complex symmetric matrix s defining I(x) = x^T s x."""

    s: np.ndarray
    label: str

    def __call__(self, x) -> complex:
        x = np.asarray(x, dtype=complex)
        return complex(x @ self.s @ x)

    def gradient(self, x) -> np.ndarray:
        return 2.0 * (self.s @ np.asarray(x, dtype=complex))

    @property
    def is_real(self) -> bool:
        return not np.any(self.s.imag)


def build_lax2(pair: AdmissiblePair) -> LaxPairModel:
    """The 2x2 pair: B = -(i lam / 2) J, L(x) = [[a, d], [d, -a]]."""
    b = (-0.5j * pair.lam) * J2.astype(complex)
    cov = np.array([[pair.w, pair.w_hat], [pair.w_hat, -pair.w]])
    return LaxPairModel(b=b, covectors=cov, kind="DIM2")


def integral_of_pair(pair: AdmissiblePair) -> QuadraticIntegral:
    """s = 2 (w w^T + what what^T); satisfies I(x) = Tr(L(x)^2) for all x."""
    s = 2.0 * (np.outer(pair.w, pair.w) + np.outer(pair.w_hat, pair.w_hat))
    s.setflags(write=False)
    return QuadraticIntegral(s=s, label=f"I[lam={pair.lam:.6g}]")


def factorized_integral(pair: AdmissiblePair, x) -> complex:
    """Product form 2 (x.(w + i what)) (x.(w - i what)) of the integral.

    The two linear factors are x^T (E -+ lam^-1 P Gamma^-1) w, which is why
    the integral vanishes identically exactly when w is an eigenvector.
    """
    x = np.asarray(x, dtype=complex)
    plus = x @ (pair.w + 1j * pair.w_hat)
    minus = x @ (pair.w - 1j * pair.w_hat)
    return complex(2.0 * plus * minus)


def trace_power(l: np.ndarray, k: int, tol: float = 1e-10) -> complex:
    """Tr(L^k) for a symmetric traceless 2x2 L: 0 for odd k, 2 (I/2)^(k/2) else."""
    l = np.asarray(l, dtype=complex)
    if l.shape != (2, 2):
        raise DimensionMismatch(f"expected 2x2, got {l.shape}")
    scale = max(1.0, float(np.abs(l).max()))
    if abs(l[0, 1] - l[1, 0]) > tol * scale or abs(l[0, 0] + l[1, 1]) > tol * scale:
        raise ValidationError("L must be symmetric with zero trace")
    if k <= 0:
        raise ValidationError("k must be a positive integer")
    if k % 2 == 1:
        return 0.0 + 0.0j
    half_i = l[0, 0] ** 2 + l[0, 1] ** 2   # I/2 = g^2 + h^2
    return complex(2.0 * half_i ** (k // 2))


def normalize_n1(pair: AdmissiblePair, sys: ValidatedSystem,
                 tol: float = 1e-12) -> AdmissiblePair:
    """Rescale w (n = 1 only) so that w^T Gamma P Gamma^-1 w = det P.

    The scaled pair's integral equals 4H, i.e. its matrix is exactly 2P.
    Both square roots of c^2 give the same integral; the root with
    arg(c) in (-pi/2, pi/2] is chosen for determinism.  Note c may be
    purely imaginary (P negative definite), in which case the scaled w
    is not real; the integral identity is unaffected.
    """
    if sys.n != 1:
        raise DimensionMismatch("normalization is defined for n = 1 systems")
    form = complex(pair.w @ sys.gamma @ (sys.pg @ pair.w))
    det_p = determinant(sys.p)
    if abs(form) <= tol * max(1.0, abs(det_p)) * float(np.linalg.norm(pair.w)) ** 2:
        raise DegenerateForm(
            f"w^T Gamma P Gamma^-1 w = {form:.3e} is numerically zero")
    c = cmath.sqrt(det_p / form)
    if c.real < 0 or (c.real == 0 and c.imag < 0):
        c = -c
    w = c * pair.w
    w_hat = c * pair.w_hat
    check = complex(w @ np.linalg.inv(sys.p) @ w)
    if abs(check - 1.0) > 1e-9:
        raise VerificationError(
            f"normalized pair fails w^T P^-1 w = 1 (got {check:.3e})")
    w.setflags(write=False)
    w_hat.setflags(write=False)
    return AdmissiblePair(lam=pair.lam, w=w, w_hat=w_hat,
                          lambda_sq_class=pair.lambda_sq_class)


def _symmetric_sqrt(p: np.ndarray) -> np.ndarray:
    """Symmetric complex T with T^2 = P, principal branch per eigenvalue."""
    vals, vecs = np.linalg.eigh(p)
    roots = np.sqrt(vals.astype(complex))   # negative mu -> +i sqrt(|mu|)
    return (vecs * roots) @ vecs.T


def sqrt_lax_n1(sys: ValidatedSystem, tol: float = 1e-10) -> LaxPairModel:
    """n = 1 construction through a symmetric square root T of P.

    L(x) = T Z - Gamma^-1 T Z Gamma with Z = [[x1, 0], [x2, 0]] collapses to
    [[g, h], [h, -g]] with (g, h) = T x, and B = -(det T / 2) Gamma^-1.
    The skew/symmetric exchange identity Gamma T = det T * T^-1 Gamma is
    re-verified numerically before the model is returned.
    """
    if sys.n != 1:
        raise DimensionMismatch("square-root construction requires n = 1")
    t = _symmetric_sqrt(sys.p)
    det_t = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    if abs(det_t) <= tol * max(1.0, float(np.abs(t).max()) ** 2):
        raise SingularRoot(f"det T = {det_t:.3e} is numerically zero")
    sq_resid = np.linalg.norm(t @ t - sys.p)
    if sq_resid > tol * max(1.0, np.linalg.norm(sys.p)):
        raise SingularRoot(f"T^2 != P within tolerance: residual {sq_resid:.3e}")
    exchange = np.linalg.norm(
        sys.gamma @ t - det_t * np.linalg.inv(t) @ sys.gamma)
    if exchange > 1e-10 * max(1.0, float(np.abs(t).max())):
        raise VerificationError(
            f"exchange identity Gamma T = det T * T^-1 Gamma fails: "
            f"residual {exchange:.3e}")
    b = (-det_t / 2.0) * sys.gamma_inv.astype(complex)
    cov = np.array([[t[0, :], t[1, :]], [t[1, :], -t[0, :]]])
    return LaxPairModel(b=b, covectors=cov, kind="SQRT_N1")


def _pairwise_distinct_sq(pairs, tol: float = 1e-9):
    lams_sq = [p.lam ** 2 for p in pairs]
    scale = max(max(abs(v) for v in lams_sq), 1e-300)
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if abs(lams_sq[i] - lams_sq[j]) <= tol * scale:
                raise DuplicateLambdaSq(
                    f"pairs {i} and {j} share lambda^2 = {lams_sq[i]:.6g}")


def block_lax_2n(pairs: list[AdmissiblePair], cond_tol: float = 1e10) -> LaxPairModel:
    """Block-diagonal 2n model from n pairs with pairwise distinct lambda^2.

    The 2n covectors {w_j, what_j} must span C^{2n} (checked by SVD rather
    than trusted), which is what makes the matrix system equivalent to the
    original flow.
    """
    if not pairs:
        raise WrongCount("need at least one admissible pair")
    dim = pairs[0].w.shape[0]
    n = dim // 2
    if len(pairs) != n:
        raise WrongCount(f"need exactly n = {n} pairs, got {len(pairs)}")
    _pairwise_distinct_sq(pairs)

    rows = []
    for p in pairs:
        rows.extend([p.w, p.w_hat])
    stack = np.array(rows)
    sigma = np.linalg.svd(stack, compute_uv=False)
    if sigma[-1] <= 0 or sigma[0] / sigma[-1] > cond_tol:
        raise RankDeficient(
            f"covectors {{w_j, what_j}} do not span: singular values {sigma}")

    b = np.zeros((dim, dim), dtype=complex)
    cov = np.zeros((dim, dim, dim), dtype=complex)
    for j, p in enumerate(pairs):
        blk = build_lax2(p)
        sl = slice(2 * j, 2 * j + 2)
        b[sl, sl] = blk.b
        cov[sl, sl, :] = blk.covectors
    return LaxPairModel(b=b, covectors=cov, kind="BLOCK_DIAG")


def same_lambda_block_lax(
    sys: ValidatedSystem,
    lam: complex,
    ws: list[np.ndarray],
    pattern: list[list[int | None]],
    tol: float = 1e-8,
) -> LaxPairModel:
    """2n model with n x n blocks B = -(i lam / 2)[[0, E], [-E, 0]], L = [[A, D], [D, -A]].

    pattern[k][l] indexes into ws (None fills the slot with zeros) and must
    be symmetric; entry (k, l) of A and D uses a = x.w, d = x.what for the
    selected vector.  Tr(L^2) is then the sum of the diagonal integrals plus
    twice the off-diagonal ones.
    """
    lam = complex(lam)
    n = sys.n
    pg = sys.pg.astype(complex)
    pg_sq_norm = max(1.0, float(np.linalg.norm(pg @ pg)))

    checked: list[tuple[np.ndarray, np.ndarray]] = []
    for i, w in enumerate(ws):
        w = np.asarray(w, dtype=complex)
        resid = np.linalg.norm(pg @ (pg @ w) - lam * lam * w)
        if resid > tol * pg_sq_norm * np.linalg.norm(w):
            raise VectorNotInVLambda(
                f"ws[{i}] is not in V_lambda: residual {resid:.3e}")
        checked.append((w, (1j / lam) * (pg @ w)))

    if len(pattern) != n or any(len(row) != n for row in pattern):
        raise WrongCount(f"pattern must be {n}x{n}")
    for k in range(n):
        for l in range(n):
            if pattern[k][l] != pattern[l][k]:
                raise ValidationError("pattern must be symmetric")

    dim = 2 * n
    b = np.zeros((dim, dim), dtype=complex)
    h = -0.5j * lam
    b[:n, n:] = h * np.eye(n)
    b[n:, :n] = -h * np.eye(n)

    cov = np.zeros((dim, dim, dim), dtype=complex)
    for k in range(n):
        for l in range(n):
            idx = pattern[k][l]
            if idx is None:
                continue
            w, w_hat = checked[idx]
            cov[k, l] += w            # A block
            cov[n + k, n + l] -= w    # -A block
            cov[k, n + l] += w_hat    # D block
            cov[n + k, l] += w_hat    # D block
    return LaxPairModel(b=b, covectors=cov, kind="BLOCK_DIAG")


def conjugate_pair_real_block(lam: complex) -> np.ndarray:
    """Real 4x4 [[0, N1], [N2, 0]] with the eigenvalues {lam, -lam, conj both}."""
    a, b = float(np.real(lam)), float(abs(np.imag(lam)))
    n1 = np.array([[a, b], [b, -a]])
    n2 = np.array([[a, -b], [-b, -a]])
    out = np.zeros((4, 4))
    out[:2, 2:] = n1
    out[2:, :2] = n2
    return out


def _normalize_columns(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v, axis=0)
    for j in range(v.shape[1]):
        k = int(np.argmax(np.abs(v[:, j])))
        phase = v[k, j] / abs(v[k, j])
        v[:, j] = v[:, j] / phase
    return v


def _similarity_to(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """S with S source S^-1 = target, for diagonalizable matrices sharing
    a simple spectrum; eigenvectors are phase-normalized for determinism."""
    from scipy.optimize import linear_sum_assignment

    vals_s, vecs_s = np.linalg.eig(source)
    vals_t, vecs_t = np.linalg.eig(target)
    cost = np.abs(vals_t[:, None] - vals_s[None, :])
    rows, cols = linear_sum_assignment(cost)
    order = np.empty_like(cols)
    order[rows] = cols
    vecs_s = vecs_s[:, order]
    vecs_s = _normalize_columns(vecs_s)
    vecs_t = _normalize_columns(vecs_t)
    return vecs_t @ np.linalg.inv(vecs_s)


def real_form_lax(pairs: list[AdmissiblePair], tol: float = 1e-9) -> LaxPairModel:
    """Conjugate the block model so B becomes real.

    Pure-imaginary lambda blocks are already real; real-lambda blocks go to
    their real diagonal form; conjugate (lambda, conj lambda) groups go to
    -1/2 [[0, N1], [N2, 0]].  The resulting L is complex in general, and its
    real and imaginary parts each satisfy the Lax equation with the real B.
    """
    used = [False] * len(pairs)
    groups: list[tuple[list[int], np.ndarray, np.ndarray]] = []

    for j, pj in enumerate(pairs):
        if used[j]:
            continue
        used[j] = True
        bj = build_lax2(pj)
        if pj.lambda_sq_class is LambdaClass.GENUINELY_COMPLEX:
            partner = None
            for k in range(len(pairs)):
                if not used[k] and abs(pairs[k].lam - np.conj(pj.lam)) <= \
                        tol * max(1.0, abs(pj.lam)):
                    partner = k
                    break
            if partner is None:
                raise NotConjugateClosed(
                    f"no conjugate partner for lambda = {pj.lam:.6g}")
            used[partner] = True
            bk = build_lax2(pairs[partner])
            source_b = np.zeros((4, 4), dtype=complex)
            source_b[:2, :2] = bj.b
            source_b[2:, 2:] = bk.b
            target_b = -0.5 * conjugate_pair_real_block(pj.lam).astype(complex)
            s = _similarity_to(source_b, target_b)
            cov = np.zeros((4, 4, pj.w.shape[0]), dtype=complex)
            cov[:2, :2] = bj.covectors
            cov[2:, 2:] = bk.covectors
            groups.append(([j, partner], target_b,
                           np.einsum("ia,abx,bj->ijx", s, cov, np.linalg.inv(s))))
        elif pj.lambda_sq_class is LambdaClass.PURE_IMAGINARY_LAMBDA:
            groups.append(([j], bj.b, bj.covectors))   # -(i lam/2) J is real
        else:  # REAL_LAMBDA: go to the real diagonal normal form
            target_b = np.diag([pj.lam / 2.0, -pj.lam / 2.0]).astype(complex)
            s = _similarity_to(bj.b, target_b)
            groups.append(([j], target_b,
                           np.einsum("ia,abx,bj->ijx", s, bj.covectors,
                                     np.linalg.inv(s))))

    dim = sum(g[1].shape[0] for g in groups)
    state_dim = pairs[0].w.shape[0]
    b = np.zeros((dim, dim), dtype=complex)
    cov = np.zeros((dim, dim, state_dim), dtype=complex)
    pos = 0
    for _, gb, gcov in groups:
        k = gb.shape[0]
        b[pos:pos + k, pos:pos + k] = gb
        cov[pos:pos + k, pos:pos + k, :] = gcov
        pos += k
    im_norm = float(np.abs(b.imag).max()) if b.size else 0.0
    if im_norm > tol * max(1.0, float(np.abs(b).max())):
        raise VerificationError(f"real form failed: ||Im B|| = {im_norm:.3e}")
    b = b.real.astype(complex)
    return LaxPairModel(b=b, covectors=cov, kind="REAL_FORM")


def real_imag_split(i1: QuadraticIntegral, i2: QuadraticIntegral,
                    tol: float = 1e-9) -> tuple[QuadraticIntegral, QuadraticIntegral]:
    """Split a conjugate pair of integrals into two real ones.

    Requires s2 = conj(s1) within tol; returns ((s1+s2)/2, (s1-s2)/(2i))
    with the residual imaginary parts zeroed.
    """
    s1, s2 = i1.s, i2.s
    scale = max(float(np.abs(s1).max()), 1e-300)
    if s1.shape != s2.shape or np.abs(s2 - np.conj(s1)).max() > tol * scale:
        raise NotConjugatePair("i2 is not the conjugate of i1 within tolerance")
    re_s = 0.5 * (s1 + s2)
    im_s = (s1 - s2) / 2j
    for name, m in (("Re", re_s), ("Im", im_s)):
        resid = float(np.abs(m.imag).max())
        if resid > tol * scale:
            raise NotConjugatePair(
                f"{name} part has imaginary residual {resid:.3e}")
    re_s = re_s.real.copy()
    im_s = im_s.real.copy()
    re_s.setflags(write=False)
    im_s.setflags(write=False)
    return (QuadraticIntegral(s=re_s, label=f"Re({i1.label})"),
            QuadraticIntegral(s=im_s, label=f"Im({i1.label})"))
