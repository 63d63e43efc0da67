"""Dense matrix substrate: system validation, arithmetic, det/inverse, JSON IO.

Matrices are plain numpy arrays (float64 / complex128, row-major).  All
functions are pure; ValidatedSystem freezes its arrays after construction.
Dimensions are small by contract (2n <= 64), so everything goes through
LAPACK's LU with partial pivoting -- no blocked or sparse paths.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NotSkewSymmetric,
    NotSymmetric,
    ParseError,
    Singular,
)

MAX_DIM = 64


def default_singular_tol(m: np.ndarray) -> float:
    """Scale-invariant singularity cutoff: 1e-12 * max(1, ||M||_inf)."""
    norm = float(np.linalg.norm(m, np.inf)) if m.size else 0.0
    return 1e-12 * max(1.0, norm)


def _as_square(m, name: str) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a


# -- dense arithmetic ---------------------------------------------------------

def add(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"add: shapes {a.shape} vs {b.shape}")
    return a + b


def sub(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"sub: shapes {a.shape} vs {b.shape}")
    return a - b


def scale(a, c):
    return np.asarray(a) * c


def matmul(a, b):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise DimensionMismatch(f"matmul: inner dims {a.shape} vs {b.shape}")
    return a @ b


def transpose(a):
    return np.asarray(a).T


def conjugate(a):
    return np.conj(np.asarray(a))


def determinant(m) -> complex | float:
    """LU-with-partial-pivoting determinant (exact sign for permutations)."""
    a = _as_square(m, "matrix")
    return np.linalg.det(a).item()


def inverse(m, tol: float | None = None) -> np.ndarray:
    a = _as_square(m, "matrix")
    if tol is None:
        tol = default_singular_tol(a)
    if abs(np.linalg.det(a)) <= tol:
        raise Singular(f"matrix is singular within tol {tol:g}")
    return np.linalg.inv(a)


# -- validated system ---------------------------------------------------------

@dataclass(frozen=True)
class ValidatedSystem:
    """The pair (Gamma, P), checked, with cached Gamma^-1.

    gamma is exactly skew-symmetric and p exactly symmetric as stored;
    both are nonsingular.  The half-dimension n satisfies 2n = gamma.shape[0].
    """

    gamma: np.ndarray
    p: np.ndarray
    n: int
    gamma_inv: np.ndarray
    _pg: np.ndarray = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def pg(self) -> np.ndarray:
        """The matrix P @ Gamma^-1 driving the spectral theory."""
        return self._pg

    @property
    def flow_matrix(self) -> np.ndarray:
        """Right-hand side matrix of the evolution: xdot = -Gamma^-1 P x."""
        return -self.gamma_inv @ self.p


def _first_violation(a: np.ndarray, b: np.ndarray):
    """Index of the first entry where a != b exactly, or None."""
    bad = np.argwhere(a != b)
    return tuple(int(i) for i in bad[0]) if len(bad) else None


def validate_system(gamma, p, tol: float | None = None) -> ValidatedSystem:
    """Check symmetry classes and nonsingularity of (Gamma, P).

    Symmetry is checked by exact entry comparison: the caller constructs
    the inputs, so exactness is achievable and removes a tuning knob.
    """
    g = _as_square(gamma, "gamma").astype(float, copy=True)
    pm = _as_square(p, "p").astype(float, copy=True)
    if g.shape != pm.shape:
        raise DimensionMismatch(f"gamma {g.shape} vs p {pm.shape}")
    dim = g.shape[0]
    if dim % 2 != 0 or dim < 2:
        raise DimensionMismatch(f"dimension must be even and >= 2, got {dim}")
    if dim > MAX_DIM:
        raise DimensionMismatch(f"dimension {dim} exceeds supported max {MAX_DIM}")

    idx = _first_violation(g.T, -g)
    if idx is not None:
        raise NotSkewSymmetric(f"gamma is not skew-symmetric at {idx}")
    idx = _first_violation(pm.T, pm)
    if idx is not None:
        raise NotSymmetric(f"p is not symmetric at {idx}")

    tol_g = tol if tol is not None else default_singular_tol(g)
    tol_p = tol if tol is not None else default_singular_tol(pm)
    if abs(np.linalg.det(g)) <= tol_g:
        raise Singular("gamma is singular")
    if abs(np.linalg.det(pm)) <= tol_p:
        raise Singular("p is singular")

    g_inv = np.linalg.inv(g)
    for a in (g, pm, g_inv):
        a.setflags(write=False)
    pg = pm @ g_inv
    pg.setflags(write=False)
    return ValidatedSystem(gamma=g, p=pm, n=dim // 2, gamma_inv=g_inv, _pg=pg)


# -- JSON matrix encoding -----------------------------------------------------
#
# {"rows": r, "cols": c, "entries": [e, ...]} row-major, where each entry is
# either a bare number (real shorthand) or a [re, im] pair.

def matrix_from_json(obj, require_real: bool = False) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ParseError(f"matrix must be a JSON object, got {type(obj).__name__}")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad matrix object: {exc}") from exc
    if rows <= 0 or cols <= 0:
        raise ParseError(f"bad matrix shape {rows}x{cols}")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        raise ParseError(
            f"expected {rows * cols} entries, got "
            f"{len(entries) if isinstance(entries, list) else type(entries).__name__}")

    values = []
    for k, e in enumerate(entries):
        if isinstance(e, (int, float)) and not isinstance(e, bool):
            re_part, im_part = float(e), 0.0
        elif isinstance(e, list) and len(e) == 2 and \
                all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in e):
            re_part, im_part = float(e[0]), float(e[1])
        else:
            raise ParseError(f"entry {k} must be a number or [re, im] pair, got {e!r}")
        if not (np.isfinite(re_part) and np.isfinite(im_part)):
            raise ParseError(f"entry {k} is not finite")
        if require_real and im_part != 0.0:
            raise ParseError(f"entry {k} must be real (im = 0), got im = {im_part}")
        values.append(complex(re_part, im_part))

    a = np.array(values, dtype=complex).reshape(rows, cols)
    if require_real or not np.any(a.imag):
        return np.ascontiguousarray(a.real)
    return a


def matrix_to_json(m) -> dict:
    a = np.atleast_2d(np.asarray(m))
    entries = []
    for v in a.ravel():
        c = complex(v)
        entries.append([c.real, c.imag])
    return {"rows": int(a.shape[0]), "cols": int(a.shape[1]), "entries": entries}
