"""Hermitian test matrices with prescribed spectrum and bandwidth.

Recipe: a random orthogonal ``Q`` (QR of a Gaussian matrix), the dense
matrix ``Q diag(lam) Q*``, then Householder similarity transformations that
reduce it to ``m``-banded form.  The reflectors are accumulated, so the
eigenvector basis of the banded result is known exactly and the spectral
projector never needs an eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DimensionError, ParameterError

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SeededRng:
    """Seed plus generator name; identical seeds give bit-identical draws."""

    seed: int
    algorithm: str = "PCG64"

    def generator(self) -> np.random.Generator:
        if self.algorithm != "PCG64":
            raise ParameterError(f"unsupported generator {self.algorithm!r}")
        return np.random.Generator(np.random.PCG64(self.seed))


def _as_rng(rng: SeededRng | int) -> SeededRng:
    return rng if isinstance(rng, SeededRng) else SeededRng(int(rng))


@dataclass(frozen=True)
class Provenance:
    """Exact factorization ``H = V diag(eigenvalues) V*`` (eigenvalues ascending)."""

    basis: np.ndarray
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class BandedHermitian:
    data: np.ndarray
    m: int
    provenance: Provenance | None = None
    # Largest entry hard-zeroed outside the band during reduction.
    cutoff: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray | None:
        return None if self.provenance is None else self.provenance.eigenvalues

    def bandwidth(self) -> int:
        """Measured bandwidth (largest ``|i-j|`` with a nonzero entry)."""
        i, j = np.nonzero(self.data)
        return int(np.max(np.abs(i - j))) if i.size else 0

    def residuals(self) -> dict[str, float]:
        """Invariant residuals: hermiticity, out-of-band mass, and factorization errors."""
        H = self.data
        n = self.n
        far = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) > self.m
        out = {
            "hermitian": float(np.max(np.abs(H - H.conj().T))),
            "out_of_band": float(np.max(np.abs(H[far]))) if far.any() else 0.0,
        }
        if self.provenance is not None:
            V, lam = self.provenance.basis, self.provenance.eigenvalues
            out["eig_residual"] = float(np.max(np.abs(H @ V - V * lam)))
            out["orthogonality"] = float(np.max(np.abs(V.conj().T @ V - np.eye(n))))
        return out


def random_orthogonal(n: int, rng: SeededRng | int, *, complex_: bool = False) -> np.ndarray:
    """Orthogonal (unitary) Q factor of a standard-normal matrix.

    Column phases are fixed so that ``R`` has a positive real diagonal,
    which makes ``Q`` a deterministic function of the seed.
    """
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    gen = _as_rng(rng).generator()
    Z = gen.standard_normal((n, n))
    if complex_:
        Z = Z + 1j * gen.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    phase = d / np.abs(d)
    return Q * phase


def assemble_dense(Q: np.ndarray, lam: Sequence[float]) -> np.ndarray:
    """``Q diag(lam) Q*`` with exact Hermitian symmetry."""
    lam = np.asarray(lam, dtype=float)
    Q = np.asarray(Q)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] != lam.size:
        raise DimensionError(f"Q of shape {Q.shape} does not match {lam.size} eigenvalues")
    A = (Q * lam) @ Q.conj().T
    return 0.5 * (A + A.conj().T)


def _householder(x: np.ndarray) -> tuple[np.ndarray, float, complex]:
    """Reflector ``I - beta v v*`` mapping ``x`` to ``alpha e_1``."""
    v = x.copy()
    norm = np.linalg.norm(x)
    if norm == 0.0 or np.linalg.norm(x[1:]) == 0.0:
        return v, 0.0, x[0]
    phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
    v[0] = x[0] + phase * norm
    beta = 2.0 / np.real(np.vdot(v, v))
    return v, beta, -phase * norm


def band_reduce(
    A: np.ndarray,
    m: int,
    *,
    basis: np.ndarray | None = None,
    eigenvalues: Sequence[float] | None = None,
) -> BandedHermitian:
    """Reduce Hermitian ``A`` to bandwidth ``m`` by Householder similarities.

    Works panel by panel: the block below the band in columns ``j..j+m-1``
    is QR-factorized with Householder reflectors, and the trailing matrix is
    updated two-sidedly with the compact-WY form ``I - V T V*`` of their
    product.  With ``m == 1`` this is the usual tridiagonalization.

    If ``basis``/``eigenvalues`` describe ``A = basis diag(eigenvalues) basis*``
    the result carries the transformed factorization.
    """
    if m < 1:
        raise ParameterError(f"bandwidth must be >= 1, got {m}")
    A = np.array(A, dtype=np.result_type(A, float), copy=True)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionError(f"expected a square matrix, got {A.shape}")
    W = np.eye(n, dtype=A.dtype)

    for j in range(0, max(n - m - 1, 0), m):
        r0 = j + m
        w = min(m, n - m - 1 - j)
        p = n - r0
        # All m columns left of the trailing block receive the reflectors,
        # even when the final panel only needs w < m of them.
        panel = A[r0:, j:r0].copy()
        V = np.zeros((p, w), dtype=A.dtype)
        T = np.zeros((w, w), dtype=A.dtype)
        for c in range(w):
            v, beta, alpha = _householder(panel[c:, c])
            if beta:
                panel[c:, c:] -= beta * np.outer(v, v.conj() @ panel[c:, c:])
            panel[c, c] = alpha
            panel[c + 1:, c] = 0.0
            V[c:, c] = v
            T[c, c] = beta
            if c:
                T[:c, c] = -beta * (T[:c, :c] @ (V[:, :c].conj().T @ V[:, c]))
        A[r0:, j:r0] = panel
        A[j:r0, r0:] = panel.conj().T
        A22 = A[r0:, r0:]
        Y = A22 @ V @ T
        S = T.conj().T @ (V.conj().T @ Y)
        Wk = Y - 0.5 * V @ S
        A22 -= Wk @ V.conj().T + V @ Wk.conj().T
        W[:, r0:] -= (W[:, r0:] @ V) @ T @ V.conj().T

    idx = np.arange(n)
    far = np.abs(np.subtract.outer(idx, idx)) > m
    cutoff = float(np.max(np.abs(A[far]))) if far.any() else 0.0
    A[far] = 0.0
    A = 0.5 * (A + A.conj().T)

    prov = None
    if eigenvalues is not None:
        lam = np.asarray(eigenvalues, dtype=float)
        B = np.eye(n) if basis is None else np.asarray(basis)
        if B.shape != (n, n) or lam.size != n:
            raise DimensionError("basis/eigenvalues do not match A")
        V_out = W.conj().T @ B
        order = np.argsort(lam, kind="stable")
        prov = Provenance(basis=V_out[:, order], eigenvalues=lam[order])
    return BandedHermitian(data=A, m=min(m, max(n - 1, 0)), provenance=prov,
                           cutoff=cutoff, meta={"reflector_basis": W})


def generate(
    lam: Sequence[float],
    m: int,
    rng: SeededRng | int,
    *,
    complex_: bool = False,
) -> BandedHermitian:
    """Random ``m``-banded Hermitian matrix with eigenvalues ``lam``."""
    lam = np.sort(np.asarray(lam, dtype=float))
    if lam.size < 2:
        raise DimensionError("need at least two eigenvalues")
    if m < 1:
        raise ParameterError(f"bandwidth must be >= 1, got {m}")
    rng = _as_rng(rng)
    Q = random_orthogonal(lam.size, rng, complex_=complex_)
    H = band_reduce(assemble_dense(Q, lam), m, basis=Q, eigenvalues=lam)
    H.meta.update(seed=rng.seed, algorithm=rng.algorithm)
    H.meta.pop("reflector_basis", None)
    return H


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint ``(p, q)`` pairs for each round of a cyclic sweep."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    N = len(players)
    rounds = []
    for _ in range(N - 1):
        pairs = [(players[i], players[N - 1 - i]) for i in range(N // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p >= 0 and q >= 0]
        rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(H: np.ndarray, *, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, in round-robin order so
    that the ``n/2`` rotations of a round act on disjoint index pairs and can
    be applied together.  Returns ascending eigenvalues and the matching
    orthonormal eigenvectors (as columns).
    """
    A = np.array(H, dtype=np.result_type(H, float), copy=True)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionError(f"expected a square matrix, got {A.shape}")
    A = 0.5 * (A + A.conj().T)
    V = np.eye(n, dtype=A.dtype)
    if n == 1:
        return np.real(np.diag(A)).copy(), V
    floor = _EPS * _EPS * max(np.linalg.norm(A), np.finfo(float).tiny)
    rounds = _round_robin(n)

    for _ in range(max_sweeps):
        rotated = False
        for P, Q in rounds:
            apq = A[P, Q]
            r = np.abs(apq)
            app = np.real(A[P, P])
            aqq = np.real(A[Q, Q])
            active = r > np.maximum(_EPS * np.sqrt(np.abs(app * aqq)), floor)
            if not active.any():
                continue
            rotated = True
            P, Q, apq, r, app, aqq = P[active], Q[active], apq[active], r[active], app[active], aqq[active]
            tau = (aqq - app) / (2.0 * r)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            ph = np.conj(apq / r)  # e^{-i phi}
            for M in (A, V):
                colp, colq = M[:, P].copy(), M[:, Q]
                M[:, P] = colp * c - colq * (s * ph)
                M[:, Q] = colp * s + colq * (c * ph)
            rowp, rowq = A[P, :].copy(), A[Q, :]
            A[P, :] = c[:, None] * rowp - (s * np.conj(ph))[:, None] * rowq
            A[Q, :] = s[:, None] * rowp + (c * np.conj(ph))[:, None] * rowq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
        if not rotated:
            lam = np.real(np.diag(A))
            order = np.argsort(lam, kind="stable")
            return lam[order], V[:, order]
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
