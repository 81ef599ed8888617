"""Dense complex linear algebra kernel.

Hermitian eigendecomposition by cyclic Jacobi rotations and the operator
(spectral) norm built on top of it.  Everything here is pure, deterministic
and limited to the small dense matrices (dims <= ~256) the rest of the
package produces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

JACOBI_SWEEP_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-d complex128 array and reject non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValidationError(f"expected a matrix, got array of ndim {m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a.ravel()))


def is_hermitian(a: np.ndarray, tol: float = 1e-12) -> bool:
    a = np.asarray(a)
    return frobenius(a - a.conj().T) <= tol * (1.0 + frobenius(a))


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues in ascending order, eigenvectors as unitary columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _round_robin_rounds(n: int) -> list[list[tuple[int, int]]]:
    """Tournament schedule: n-1 rounds of disjoint index pairs covering all (p, q)."""
    players = list(range(n)) + ([n] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = []
        for i in range(size // 2):
            p, q = players[i], players[size - 1 - i]
            if p < n and q < n:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(sorted(pairs))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _jacobi_sweeps(a: np.ndarray, tol: float, want_vectors: bool):
    n = a.shape[0]
    w = a.copy()
    v = np.eye(n, dtype=np.complex128) if want_vectors else None
    thresh = tol * max(frobenius(a), 1e-300)
    rounds = [
        (np.array([p for p, _ in pairs]), np.array([q for _, q in pairs]))
        for pairs in _round_robin_rounds(n)
    ]

    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for p_all, q_all in rounds:
            apq = w[p_all, q_all]
            active = np.abs(apq) > thresh
            if not active.any():
                continue
            rotated = True
            p, q = p_all[active], q_all[active]
            apq = apq[active]
            mag = np.abs(apq)
            phase = apq / mag
            tau = (w[q, q].real - w[p, p].real) / (2.0 * mag)
            with np.errstate(over="ignore"):
                t = np.sign(tau) / (np.abs(tau) + np.hypot(tau, 1.0))
            t[tau == 0.0] = 1.0  # 45 degree rotation
            cth = 1.0 / np.hypot(t, 1.0)
            sth = t * cth
            sp = sth * phase
            # disjoint rotations applied as one unitary: columns then rows
            wp, wq = w[:, p].copy(), w[:, q].copy()
            w[:, p] = wp * cth - wq * np.conj(sp)
            w[:, q] = wp * sp + wq * cth
            wp, wq = w[p, :].copy(), w[q, :].copy()
            w[p, :] = cth[:, None] * wp - sp[:, None] * wq
            w[q, :] = np.conj(sp)[:, None] * wp + cth[:, None] * wq
            if want_vectors:
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = vp * cth - vq * np.conj(sp)
                v[:, q] = vp * sp + vq * cth
            w[p, q] = 0.0
            w[q, p] = 0.0
        if not rotated:
            break
    return w, v


def _check_square_hermitian(a) -> np.ndarray:
    a = as_matrix(a)
    n, m = a.shape
    if n != m:
        raise ValidationError(f"eigendecomposition needs a square matrix, got {n}x{m}")
    if not is_hermitian(a):
        raise ValidationError("matrix is not Hermitian within 1e-12")
    return a


def herm_eigen(a, tol: float = JACOBI_SWEEP_TOL) -> HermitianEigen:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps use the round-robin ordering so each round applies disjoint
    rotations as a single unitary.  ``tol`` is the off-diagonal threshold
    relative to the Frobenius norm; entries below it are not rotated.
    Raises ValidationError for non-square or non-Hermitian input.
    """
    a = _check_square_hermitian(a)
    n = a.shape[0]
    if n == 0:
        return HermitianEigen(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
    if n == 1:
        return HermitianEigen(
            np.array([a[0, 0].real]), np.ones((1, 1), dtype=np.complex128)
        )
    w, v = _jacobi_sweeps(a, tol, want_vectors=True)
    vals = np.real(np.diag(w))
    order = np.argsort(vals, kind="stable")
    return HermitianEigen(vals[order], v[:, order])


def eigvals_hermitian(a, tol: float = JACOBI_SWEEP_TOL) -> np.ndarray:
    """Ascending eigenvalues only; same sweeps, no eigenvector updates."""
    a = _check_square_hermitian(a)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0)
    if n == 1:
        return np.array([a[0, 0].real])
    w, _ = _jacobi_sweeps(a, tol, want_vectors=False)
    return np.sort(np.real(np.diag(w)))


def operator_norm(a) -> float:
    """Largest singular value: sqrt of the top eigenvalue of A*A.

    Hermitian input short-circuits to max |eigenvalue|, which is the same
    number without forming the Gram matrix.
    """
    a = as_matrix(a)
    if a.size == 0:
        return 0.0
    if a.shape == (1, 1):
        return abs(complex(a[0, 0]))
    if a.shape[0] == a.shape[1] and is_hermitian(a):
        sym = 0.5 * (a + a.conj().T)
        vals = eigvals_hermitian(sym)
        return float(max(abs(vals[0]), abs(vals[-1])))
    gram = a.conj().T @ a
    gram = 0.5 * (gram + gram.conj().T)
    top = eigvals_hermitian(gram)[-1]
    return float(np.sqrt(max(top, 0.0)))


def _batched_jacobi_diagonal(h: np.ndarray, tol: float = JACOBI_SWEEP_TOL) -> np.ndarray:
    """Diagonalize a stack of Hermitian matrices; returns the (unsorted) diagonals.

    Same round-robin sweeps as the single-matrix path, with per-sample
    rotation angles; converged samples ride along with identity rotations.
    """
    w = h.copy()
    s_count, n = w.shape[0], w.shape[-1]
    thresh = np.maximum(
        tol * np.sqrt(np.sum(np.abs(h) ** 2, axis=(1, 2))), 1e-300
    )
    rounds = [
        (np.array([p for p, _ in pairs]), np.array([q for _, q in pairs]))
        for pairs in _round_robin_rounds(n)
    ]
    eye = np.broadcast_to(np.eye(n, dtype=np.complex128), (s_count, n, n))
    for _ in range(JACOBI_MAX_SWEEPS):
        rotated = False
        for p, q in rounds:
            apq = w[:, p, q]
            active = np.abs(apq) > thresh[:, None]
            if not active.any():
                continue
            rotated = True
            mag = np.where(active, np.abs(apq), 1.0)
            phase = np.where(active, apq / mag, 1.0)
            tau = (w[:, q, q].real - w[:, p, p].real) / (2.0 * mag)
            with np.errstate(over="ignore"):
                t = np.sign(tau) / (np.abs(tau) + np.hypot(tau, 1.0))
            t = np.where(active & (tau == 0.0), 1.0, t)
            t = np.where(active, t, 0.0)
            cth = 1.0 / np.hypot(t, 1.0)
            sth = t * cth
            sp = sth * phase
            g = eye.copy()
            g[:, p, p] = cth
            g[:, p, q] = sp
            g[:, q, p] = -np.conj(sp)
            g[:, q, q] = cth
            w = np.conj(np.swapaxes(g, 1, 2)) @ w @ g
            cur = w[:, p, q]
            w[:, p, q] = np.where(active, 0.0, cur)
            w[:, q, p] = np.conj(w[:, p, q])
        if not rotated:
            break
    return np.real(w[:, np.arange(n), np.arange(n)])


def batched_eigvals_hermitian(h: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a stack of Hermitian matrices (..., d, d)."""
    h = np.asarray(h, dtype=np.complex128)
    d = h.shape[-1]
    flat = h.reshape(-1, d, d)
    if d == 1:
        return flat[:, 0, 0].real.reshape(h.shape[:-2] + (1,)).copy()
    diag = _batched_jacobi_diagonal(flat)
    return np.sort(diag, axis=-1).reshape(h.shape[:-2] + (d,))


def batched_hermitian_opnorms(h: np.ndarray) -> np.ndarray:
    """Operator norms of a stack of Hermitian matrices, shape (..., d, d).

    Closed form for d <= 2, batched Jacobi above.
    """
    h = np.asarray(h, dtype=np.complex128)
    d = h.shape[-1]
    if d == 1:
        return np.abs(h[..., 0, 0].real)
    if d == 2:
        p = h[..., 0, 0].real
        q = h[..., 1, 1].real
        z = h[..., 0, 1]
        mean = 0.5 * (p + q)
        rad = np.sqrt(np.maximum(0.25 * (p - q) ** 2 + np.abs(z) ** 2, 0.0))
        return np.maximum(np.abs(mean + rad), np.abs(mean - rad))
    vals = batched_eigvals_hermitian(h)
    return np.maximum(np.abs(vals[..., 0]), np.abs(vals[..., -1]))
