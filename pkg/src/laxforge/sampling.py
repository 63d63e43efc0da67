"""Random and named test systems.

Symmetry must hold exactly (validate_system compares entries bitwise), so
symmetric matrices are built by mirroring an upper triangle and skew ones
by differencing a strict triangle -- both exact in floating point.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .matrices import ValidatedSystem, validate_system
from .spectral import eigen_decompose, is_simple_spectrum


def exact_symmetric(m: np.ndarray) -> np.ndarray:
    u = np.triu(m)
    return u + np.triu(m, 1).T


def exact_skew(m: np.ndarray) -> np.ndarray:
    u = np.triu(m, 1)
    return u - u.T


def random_system(rng: np.random.Generator, n: int, *, spd: bool = False,
                  simple: bool = True, max_tries: int = 200) -> ValidatedSystem:
    """Draw a validated system of half-dimension n.

    spd=True makes P positive definite, which keeps all trajectories on
    compact energy levels (purely imaginary spectrum) -- required for
    long-horizon conservation checks at double precision.
    """
    dim = 2 * n
    for _ in range(max_tries):
        if spd:
            a = rng.normal(size=(dim, dim))
            p = exact_symmetric(a @ a.T + 0.5 * np.eye(dim))
        else:
            p = exact_symmetric(rng.normal(size=(dim, dim)))
        gamma = exact_skew(rng.normal(size=(dim, dim)))
        try:
            sys = validate_system(gamma, p)
        except ValidationError:
            continue
        if not simple:
            return sys
        spec = eigen_decompose(sys.pg)
        if is_simple_spectrum(spec, gap_tol=1e-6):
            return sys
    raise ValidationError(f"no valid random system found in {max_tries} tries")


def standard_symplectic(n: int) -> np.ndarray:
    """Block-diagonal Gamma with 2x2 blocks [[0, 1], [-1, 0]]."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n, 2 * n))
    for k in range(n):
        out[2 * k:2 * k + 2, 2 * k:2 * k + 2] = j
    return out


def planar_rotation_system() -> ValidatedSystem:
    """n = 1 harmonic oscillator: P = E, purely imaginary spectrum {i, -i}."""
    return validate_system(standard_symplectic(1), np.eye(2))


def hyperbolic_system(k: float = 1.0) -> ValidatedSystem:
    """n = 1 with real spectrum {k, -k}: P = [[0, k], [k, 0]]."""
    return validate_system(standard_symplectic(1), np.array([[0.0, k], [k, 0.0]]))


def focus_system(a: float = 1.0, b: float = 2.0) -> ValidatedSystem:
    """Coupled 4x4 system with spectrum {+-(a+bi), +-(a-bi)}."""
    p = np.array([
        [0.0, a, 0.0, b],
        [a, 0.0, -b, 0.0],
        [0.0, -b, 0.0, a],
        [b, 0.0, a, 0.0],
    ])
    return validate_system(standard_symplectic(2), p)


def focus_reference_vectors(a: float = 1.0, b: float = 2.0):
    """The distinguished eigen-data of the focus system.

    Returns (lam, w, w_tilde) with lam = a + bi; w spans V_lam together
    with w_tilde = -what, and both are not eigenvectors of P Gamma^-1.
    """
    lam = complex(a, b)
    w = np.array([1.0, 1.0, 1.0j, -1.0j])
    w_tilde = np.array([-1.0j, 1.0j, 1.0, 1.0])
    return lam, w, w_tilde


def split_real_spectrum_system(k1: float = 1.0, k2: float = 2.0) -> ValidatedSystem:
    """n = 2 block system with simple real spectrum {k1, -k1, k2, -k2}."""
    if abs(abs(k1) - abs(k2)) < 1e-12:
        raise ValidationError("k1 and k2 must differ in magnitude")
    p = np.zeros((4, 4))
    p[0, 1] = p[1, 0] = k1
    p[2, 3] = p[3, 2] = k2
    return validate_system(standard_symplectic(2), p)


def mixed_class_system() -> ValidatedSystem:
    """n = 2 block system with one imaginary pair {i, -i} and one real {2, -2}."""
    p = np.zeros((4, 4))
    p[0, 0] = p[1, 1] = 1.0
    p[2, 3] = p[3, 2] = 2.0
    return validate_system(standard_symplectic(2), p)
