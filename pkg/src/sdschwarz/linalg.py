"""Sparse storage, direct factorization and an unrestarted GMRES.

Sparse matrices are plain ``scipy.sparse.csr_matrix`` objects; the direct
solver is SuperLU via :func:`scipy.sparse.linalg.splu`. GMRES is written
out here because the interface solver needs its full residual history and
exact control over the stopping rule.
"""

import numpy as np
import scipy.io
import scipy.sparse as sp
import scipy.sparse.linalg as spla


class SingularMatrixError(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    """Raised when an iteration exhausts ``max_iter``.

    The partial iterate and residual history are kept on the exception.
    """

    def __init__(self, message, x=None, history=None):
        super().__init__(message)
        self.x = x
        self.history = history


def to_csr(A):
    """Canonical CSR: sorted column indices, duplicates summed."""
    A = sp.csr_matrix(A, dtype=float)
    A.sum_duplicates()
    A.sort_indices()
    return A


class Factorization:
    """Reusable LU factorization of a square sparse matrix."""

    def __init__(self, A):
        A = sp.csc_matrix(A, dtype=float)
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"matrix must be square, got shape {A.shape}")
        self.shape = A.shape
        try:
            self._lu = spla.splu(A)
        except RuntimeError as err:
            raise SingularMatrixError(f"LU factorization failed: {err}") from err
        diag = np.abs(self._lu.U.diagonal())
        scale = max(abs(A).max(), np.finfo(float).tiny)
        bad = np.flatnonzero(diag <= 1e3 * np.finfo(float).eps * scale)
        if bad.size:
            raise SingularMatrixError(
                f"matrix is numerically singular: pivot {bad[0]} of {A.shape[0]} "
                f"is {diag[bad[0]]:.3e}"
            )
        self.n_solves = 0

    def solve(self, b):
        b = np.asarray(b, dtype=float)
        if b.shape[0] != self.shape[0]:
            raise ValueError(f"rhs has length {b.shape[0]}, expected {self.shape[0]}")
        self.n_solves += 1
        return self._lu.solve(b)


def factorize(A):
    return Factorization(A)


def as_operator(op):
    if callable(op) and not hasattr(op, "shape"):
        raise TypeError("pass a matrix or scipy LinearOperator, not a bare callable")
    return spla.aslinearoperator(op)


def gmres(op, b, tol=1e-9, max_iter=None, x0=None, reorth_tol=1e-8):
    """Solve ``op @ x = b`` by GMRES without restarts.

    Stops at the first iterate with ``||b - op x|| <= tol * ||b - op x0||``.
    Arnoldi uses modified Gram-Schmidt, with one extra pass whenever the new
    vector still has a component above ``reorth_tol`` (relative) along the
    existing basis.

    Returns
    -------
    x : ndarray
    history : list of float
        Relative residual norms after iterations 1..m, so ``len(history)``
        is the iteration count.

    Raises
    ------
    ConvergenceError
        If ``max_iter`` iterations do not reach ``tol``; the exception holds
        the last iterate and history.
    """
    A = as_operator(op)
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    if A.shape != (n, n):
        raise ValueError(f"operator shape {A.shape} incompatible with rhs length {n}")
    if max_iter is None:
        max_iter = n
    x0 = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    r0 = b - A.matvec(x0) if np.any(x0) else b.copy()
    beta = np.linalg.norm(r0)
    history = []
    if beta == 0.0:
        return x0, history

    V = np.zeros((max_iter + 1, n))
    H = np.zeros((max_iter + 1, max_iter))
    cs = np.zeros(max_iter)
    sn = np.zeros(max_iter)
    g = np.zeros(max_iter + 1)
    g[0] = beta
    V[0] = r0 / beta

    m = 0
    for j in range(max_iter):
        w = A.matvec(V[j])
        w_norm0 = np.linalg.norm(w)
        for i in range(j + 1):
            H[i, j] = V[i] @ w
            w -= H[i, j] * V[i]
        w_norm = np.linalg.norm(w)
        if w_norm > 0 and np.max(np.abs(V[: j + 1] @ w)) > reorth_tol * w_norm:
            for i in range(j + 1):
                c = V[i] @ w
                H[i, j] += c
                w -= c * V[i]
            w_norm = np.linalg.norm(w)
        H[j + 1, j] = w_norm

        # previous Givens rotations, then a new one to zero H[j+1, j]
        for i in range(j):
            t = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
            H[i + 1, j] = -sn[i] * H[i, j] + cs[i] * H[i + 1, j]
            H[i, j] = t
        denom = np.hypot(H[j, j], H[j + 1, j])
        if denom == 0.0:
            raise SingularMatrixError(f"GMRES: singular Hessenberg at step {j + 1}")
        cs[j] = H[j, j] / denom
        sn[j] = H[j + 1, j] / denom
        H[j, j] = denom
        H[j + 1, j] = 0.0
        g[j + 1] = -sn[j] * g[j]
        g[j] = cs[j] * g[j]

        m = j + 1
        res = abs(g[j + 1]) / beta
        history.append(res)
        breakdown = w_norm <= 1e-14 * w_norm0
        if res <= tol or breakdown:
            break
        V[j + 1] = w / w_norm

    y = _back_substitute(H[:m, :m], g[:m])
    x = x0 + V[:m].T @ y
    if history and history[-1] > tol:
        true_res = np.linalg.norm(b - A.matvec(x)) / beta
        if true_res > tol:
            raise ConvergenceError(
                f"GMRES did not converge in {m} iterations (relative residual {true_res:.3e})",
                x=x,
                history=history,
            )
    return x, history


def _back_substitute(R, g):
    m = R.shape[0]
    y = np.zeros(m)
    for i in range(m - 1, -1, -1):
        y[i] = (g[i] - R[i, i + 1 :] @ y[i + 1 :]) / R[i, i]
    return y


def write_matrix_market(path, obj, comment=""):
    """Dump a sparse matrix or dense vector in Matrix Market coordinate format."""
    if sp.issparse(obj):
        scipy.io.mmwrite(str(path), sp.coo_matrix(obj), comment=comment)
    else:
        v = np.asarray(obj, dtype=float).reshape(-1, 1)
        scipy.io.mmwrite(str(path), sp.coo_matrix(v), comment=comment)
