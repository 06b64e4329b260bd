"""Slow, literal implementation of the decomposition, for tests only.

Everything is built explicitly: the trajectory matrix, the circulant
matrix, complex eigenvectors, the elementary matrices per frequency and a
loop-based diagonal averaging. Eigenvalues are taken from a dense symmetric
eigensolver and matched to frequencies through the closed-form
eigenvectors, so no ordering of the solver output is assumed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decompose import Decomposition
from .errors import ParameterError
from .extension import ExtensionMode

MAX_L = 32
MAX_T = 400


@dataclass
class DenseArtifacts:
    X: np.ndarray  # L x N trajectory matrix
    S_C: np.ndarray  # L x L circulant matrix
    U: np.ndarray  # L x L complex, column k-1 = u_k
    eigenvalues: np.ndarray  # matched to k = 1..L
    X_B: list  # real L x N matrix per frequency group, k = 1..F


def dense_artifacts(x, L: int) -> DenseArtifacts:
    x = np.asarray(x, dtype=np.float64)
    T = x.size
    if L > MAX_L or T > MAX_T:
        raise ParameterError(f"oracle is limited to L<={MAX_L} and T<={MAX_T}, got L={L}, T={T}")
    if not 1 < L < T / 2:
        raise ParameterError(f"window length must satisfy 1<L<T/2, got L={L}, T={T}")
    N = T - L + 1

    X = np.empty((L, N))
    for i in range(L):
        for j in range(N):
            X[i, j] = x[i + j]

    gamma = np.array([sum(x[t] * x[t + m] for t in range(T - m)) / (T - m) for m in range(L)])
    c = np.array([gamma[0]] + [((L - m) * gamma[m] + m * gamma[L - m]) / L for m in range(1, L)])
    S_C = np.empty((L, L))
    for r in range(L):
        for col in range(L):
            S_C[r, col] = c[(col - r) % L]

    j = np.arange(L)
    U = np.empty((L, L), dtype=complex)
    for k in range(1, L + 1):
        # u_k = L^-1/2 (u_k1, ..., u_kL)^H
        U[:, k - 1] = np.conj(np.exp(-2j * np.pi * j * (k - 1) / L)) / np.sqrt(L)

    mu, V = np.linalg.eigh(S_C)
    corr = np.abs(U.conj().T @ V) ** 2  # corr[k, i] = |<u_k, v_i>|^2
    eigenvalues = mu[np.argmax(corr, axis=1)]

    F = L // 2 + 1
    X_B = []
    for k in range(1, F + 1):
        u = U[:, [k - 1]]
        Xk = u @ (u.conj().T @ X)
        if k != 1 and 2 * (k - 1) != L:
            v = U[:, [L + 1 - k]]
            Xk = Xk + v @ (v.conj().T @ X)
        X_B.append(Xk)
    return DenseArtifacts(X=X, S_C=S_C, U=U, eigenvalues=eigenvalues, X_B=X_B)


def diagonal_average(A) -> np.ndarray:
    """Antidiagonal averaging written out branch by branch."""
    L, N = A.shape
    T = L + N - 1
    out = np.empty(T)
    for t in range(1, T + 1):
        if t < L:
            out[t - 1] = sum(A[i - 1, t - i] for i in range(1, t + 1)) / t
        elif t <= N:
            out[t - 1] = sum(A[i - 1, t - i] for i in range(1, L + 1)) / L
        else:
            out[t - 1] = sum(A[i - 1, t - i] for i in range(t - N + 1, L + 1)) / (T - t + 1)
    return out


def oracle_decompose(x, L: int) -> Decomposition:
    """Decomposition without boundary extension, computed literally."""
    art = dense_artifacts(x, L)
    cols = []
    for Xb in art.X_B:
        # complex parts cancel between conjugate pairs
        cols.append(diagonal_average(Xb.real))
    return Decomposition(Z=np.column_stack(cols), psd=art.eigenvalues, L=L, mode=ExtensionMode("none"))
