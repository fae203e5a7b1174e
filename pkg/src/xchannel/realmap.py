"""Complex-to-real isomorphism and the small dense linear-algebra kernels.

A complex ``N x M`` system ``y = H x`` with real inputs is rewritten as a real
``2N x 2M`` system.  Every complex entry ``h`` becomes the rotation-scaling
block ``[[Re h, -Im h], [Im h, Re h]]`` and vectors are stacked per antenna as
``[Re v1, Im v1, Re v2, Im v2, ...]``.  That interleaved layout is the only one
used anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, Unsolvable

__all__ = [
    "TolerancePolicy",
    "DEFAULT_POLICY",
    "realify_matrix",
    "realify_vector",
    "derealify_vector",
    "jrotate",
    "null_space",
    "numeric_rank",
    "solve_exact",
    "relative_residual",
    "colinearity_residual",
]


@dataclass(frozen=True)
class TolerancePolicy:
    """Cutoffs that turn "almost surely full rank" into testable predicates.

    Attributes
    ----------
    rank_rel_tol : float
        A singular value counts towards the rank when it exceeds
        ``rank_rel_tol`` times the largest singular value.
    residual_rel_tol : float
        Largest accepted relative residual of a nulling, alignment or solve.
    """

    rank_rel_tol: float = 1e-8
    residual_rel_tol: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rel_tol", "residual_rel_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


DEFAULT_POLICY = TolerancePolicy()


def realify_matrix(H) -> np.ndarray:
    """Return the ``2N x 2M`` real matrix acting like complex ``H`` on stacked vectors.

    The map is a ring homomorphism: ``realify(A @ B) == realify(A) @ realify(B)``
    and ``realify(A + B) == realify(A) + realify(B)``.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {H.shape}")
    n, m = H.shape
    out = np.empty((2 * n, 2 * m))
    out[0::2, 0::2] = H.real
    out[0::2, 1::2] = -H.imag
    out[1::2, 0::2] = H.imag
    out[1::2, 1::2] = H.real
    return out


def realify_vector(v) -> np.ndarray:
    """Interleave real and imaginary parts along the first axis.

    A length-``M`` vector becomes length ``2M``; an ``M x k`` matrix has each
    of its ``k`` columns realified, giving ``2M x k``.
    """
    v = np.asarray(v, dtype=complex)
    if v.ndim not in (1, 2):
        raise ShapeError(f"expected a vector or column stack, got shape {v.shape}")
    out = np.empty((2 * v.shape[0],) + v.shape[1:])
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def derealify_vector(vbar) -> np.ndarray:
    """Inverse of :func:`realify_vector`."""
    vbar = np.asarray(vbar, dtype=float)
    if vbar.shape[0] % 2:
        raise ShapeError(f"realified vector must have even length, got {vbar.shape[0]}")
    return vbar[0::2] + 1j * vbar[1::2]


def jrotate(vbar) -> np.ndarray:
    """Multiply a realified vector by the imaginary unit.

    Each ``(Re, Im)`` pair maps to ``(-Im, Re)``, so
    ``jrotate(realify_vector(v)) == realify_vector(1j * v)`` exactly.
    """
    vbar = np.asarray(vbar, dtype=float)
    if vbar.ndim not in (1, 2) or vbar.shape[0] % 2:
        raise ShapeError(f"malformed realified vector of shape {vbar.shape}")
    out = np.empty_like(vbar)
    out[0::2] = -vbar[1::2]
    out[1::2] = vbar[0::2]
    return out


def _singular_values(A: np.ndarray) -> np.ndarray:
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def numeric_rank(A, pol: TolerancePolicy = DEFAULT_POLICY) -> int:
    """Count singular values above ``pol.rank_rel_tol`` times the largest one."""
    A = np.asarray(A)
    s = _singular_values(A)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > pol.rank_rel_tol * s[0]))


def null_space(A, pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Orthonormal basis of the numerical kernel of ``A`` (real or complex).

    Returns a ``cols x (cols - rank)`` array; the basis may have zero columns.
    """
    A = np.asarray(A)
    if A.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {A.shape}")
    n_cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n_cols, dtype=A.dtype)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > pol.rank_rel_tol * s[0]))
    return vh[rank:].conj().T


def solve_exact(A, B, pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Minimum-norm ``X`` with ``A @ X == B``.

    Raises
    ------
    Unsolvable
        If the least-squares residual ``||A X - B|| / ||B||`` exceeds
        ``pol.residual_rel_tol``.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[0] != B.shape[0]:
        raise ShapeError(f"row mismatch: A is {A.shape}, B is {B.shape}")
    X, *_ = np.linalg.lstsq(A, B, rcond=pol.rank_rel_tol)
    b_norm = np.linalg.norm(B)
    if b_norm == 0.0:
        return X
    residual = np.linalg.norm(A @ X - B) / b_norm
    if not residual <= pol.residual_rel_tol:
        raise Unsolvable(f"relative residual {residual:.3e} exceeds {pol.residual_rel_tol:.1e}")
    return X


def relative_residual(A, X) -> float:
    """``||A X|| / (||A|| ||X||)`` in the spectral norm; 0 when either factor vanishes."""
    A = np.asarray(A)
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[:, None]
    if A.size == 0 or X.size == 0:
        return 0.0
    denom = np.linalg.norm(A, 2) * np.linalg.norm(X, 2)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(A @ X, 2) / denom)


def colinearity_residual(a, b) -> float:
    """Distance of ``b`` from the line spanned by ``a``, relative to ``||b||``.

    Returns 1.0 when exactly one of the two vectors is zero.
    """
    a = np.ravel(np.asarray(a, dtype=float))
    b = np.ravel(np.asarray(b, dtype=float))
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 and nb == 0.0:
        return 0.0
    if na == 0.0 or nb == 0.0:
        return 1.0
    unit = a / na
    return float(np.linalg.norm(b - unit * (unit @ b)) / nb)
