import numpy as np
from scipy import linalg


def truncated_svd(A, rtol=1e-10):
    """Singular value decomposition with a relative rank cutoff.

    Args:

        A (array-like, shape `(m, n)`):
            The matrix to decompose.

        rtol (float):
            Singular values smaller than ``rtol * sigma_max`` are treated as
            zero.

    Returns:

        ``(U, s, Vt, rank)`` of the full decomposition, where ``rank`` is the
        number of singular values above the cutoff.
    """

    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    m, n = A.shape

    if m == 0 or n == 0:
        return np.eye(m), np.zeros(0), np.eye(n), 0

    U, s, Vt = linalg.svd(A, full_matrices=True)

    if s[0] == 0.0:
        return U, s, Vt, 0

    rank = int((s >= rtol * s[0]).sum())

    return U, s, Vt, rank


def nullspace(A, rtol=1e-10):
    """Orthonormal basis of the nullspace of `A`, as columns."""

    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    _, _, Vt, rank = truncated_svd(A, rtol)

    return Vt[rank:].T.copy()


def left_nullspace(A, rtol=1e-10):
    """Orthonormal basis of ``{w : w^T A = 0}``, as columns."""

    return nullspace(np.atleast_2d(A).T, rtol)


def rank(A, rtol=1e-10):

    return truncated_svd(A, rtol)[3]


def min_norm_solve(A, b, rtol=1e-10):
    """Minimum-norm least-squares solution of ``A x = b`` through the
    truncated pseudoinverse.

    Returns:

        The solution ``x`` and the residual ``|A x - b|``.
    """

    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    b = np.asarray(b, dtype=np.float64)
    U, s, Vt, r = truncated_svd(A, rtol)

    if r == 0:
        x = np.zeros(A.shape[1])
    else:
        x = Vt[:r].T @ ((U[:, :r].T @ b) / s[:r])

    return x, float(np.linalg.norm(A @ x - b))
