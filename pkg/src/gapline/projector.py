"""Exact spectral projectors, their entry decay, and banded truncation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import GapViolationError, ThresholdNotReachedError
from .factory import BandedHermitian, jacobi_eigh


def _eigenpairs(H: BandedHermitian | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(H, BandedHermitian):
        if H.provenance is not None:
            return H.provenance.eigenvalues, H.provenance.basis
        H = H.data
    return jacobi_eigh(np.asarray(H))


def spectral_projector(H: BandedHermitian | np.ndarray, mu: float = 0.0) -> np.ndarray:
    """Orthogonal projector onto the eigenvectors with eigenvalue below ``mu``.

    Uses the tracked factorization when ``H`` carries one, otherwise the
    Jacobi eigensolver.  The result is exactly Hermitian.
    """
    lam, V = _eigenpairs(H)
    scale = max(np.max(np.abs(lam)), np.finfo(float).tiny)
    if np.any(np.abs(lam - mu) <= 1e-12 * scale):
        raise GapViolationError(f"eigenvalue within 1e-12 relative of mu={mu}")
    occ = V[:, lam < mu]
    P = occ @ occ.conj().T
    return 0.5 * (P + P.conj().T)


def sign_matrix(H: BandedHermitian | np.ndarray) -> np.ndarray:
    """``sign(H) = I - 2P`` for the split point zero."""
    P = spectral_projector(H, 0.0)
    return np.eye(P.shape[0]) - 2.0 * P


@dataclass(frozen=True)
class DecayProfile:
    """``curve[k] = max_{|i-j|=k} |M_ij|``."""

    curve: np.ndarray
    source: str = "projector"

    def __len__(self) -> int:
        return self.curve.size

    def to_csv(self) -> str:
        return "k,value\n" + "".join(f"{k},{v:.17g}\n" for k, v in enumerate(self.curve))

    @classmethod
    def from_csv(cls, text: str, source: str = "projector") -> "DecayProfile":
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        ks = np.array([int(r[0]) for r in rows])
        if not np.array_equal(ks, np.arange(ks.size)):
            raise ValueError("decay CSV must list k = 0, 1, 2, ... in order")
        return cls(np.array([float(r[1]) for r in rows]), source)


def decay_profile(M: np.ndarray, source: str = "projector") -> DecayProfile:
    M = np.asarray(M)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError(f"expected a square matrix, got {M.shape}")
    A = np.abs(M)
    curve = np.array([
        max(np.max(np.diagonal(A, k)), np.max(np.diagonal(A, -k))) for k in range(n)
    ])
    return DecayProfile(curve, source)


def truncate_band(M: np.ndarray, m: int) -> np.ndarray:
    """Copy of ``M`` with entries ``|i-j| > m`` set to zero."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    M = np.asarray(M)
    idx = np.arange(M.shape[0])
    keep = np.abs(np.subtract.outer(idx, idx)) <= m
    return np.where(keep, M, 0)


def first_below(curve: Sequence[float], epsilon: float) -> int:
    """Smallest ``kbar`` with ``curve[k] <= epsilon`` for every ``k >= kbar``.

    This is a suffix condition, not the first crossing: an oscillating curve
    that dips below ``epsilon`` and comes back up does not count.
    """
    values = np.asarray(curve, dtype=float)
    above = np.nonzero(~(values <= epsilon))[0]  # NaN counts as above
    if above.size == 0:
        return 0
    if above[-1] == values.size - 1:
        raise ThresholdNotReachedError(
            f"curve is not definitively below {epsilon:g} on k <= {values.size - 1}"
        )
    return int(above[-1] + 1)


def truncation_bandwidth(curve: Sequence[float], epsilon: float) -> int:
    """Smallest ``m >= 0`` such that ``curve[k] <= epsilon`` for every ``k > m``.

    Applied to a full decay profile this is the narrowest band whose
    truncation has max-norm error ``<= epsilon``; it equals
    ``first_below(curve, epsilon) - 1`` whenever ``curve[0] > epsilon``.
    A full profile always has an answer (``m = n - 1`` keeps everything).
    """
    values = np.asarray(curve, dtype=float)
    above = np.nonzero(~(values <= epsilon))[0]
    return int(above[-1]) if above.size else 0


def roundoff_floor(n: int) -> float:
    """Absolute size below which computed projector entries are roundoff noise."""
    return n * np.finfo(float).eps


def bound_violations(decay: Sequence[float], bound: Sequence[float], m: int, *, floor: float = 0.0) -> np.ndarray:
    """Distances ``k >= m`` where ``decay[k] > max(bound[k], floor)``."""
    d = np.asarray(decay, dtype=float)
    B = np.asarray(bound, dtype=float)[: d.size]
    k = np.arange(B.size)
    bad = (k >= m) & (d[: B.size] > np.maximum(B, floor))
    return k[bad]


def power_norm2(E: np.ndarray, iters: int = 2000, rtol: float = 1e-12) -> float:
    """Spectral norm of ``E`` by power iteration on ``E* E``.

    Starts from a fixed pseudo-random vector and stops once the Rayleigh
    quotient changes by less than ``rtol`` relative.  Converges slowly when
    the two largest singular values are close, hence the generous ``iters``.
    """
    E = np.asarray(E)
    if not np.any(E):
        return 0.0
    x = np.random.default_rng(0).standard_normal(E.shape[1]).astype(E.dtype)
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(iters):
        y = E.conj().T @ (E @ x)
        new = float(np.sqrt(np.real(np.vdot(x, y))))
        nrm = np.linalg.norm(y)
        if nrm == 0:
            return 0.0
        x = y / nrm
        if abs(new - est) <= rtol * new:
            return new
        est = new
    return est


def truncation_errors(M: np.ndarray, m: int, *, exact_2norm: bool = False) -> dict[str, float]:
    """Norms of ``M - M^(m)``.

    ``err_2`` is the certified bound ``sqrt(|E|_1 |E|_inf)`` unless
    ``exact_2norm`` asks for a power-iteration value.
    """
    E = np.asarray(M) - truncate_band(M, m)
    A = np.abs(E)
    err_1 = float(A.sum(axis=0).max())
    err_inf = float(A.sum(axis=1).max())
    return {
        "err_max": float(A.max()),
        "err_1": err_1,
        "err_inf": err_inf,
        "err_2": power_norm2(E) if exact_2norm else float(np.sqrt(err_1 * err_inf)),
    }


REPORT_FAMILIES = {"m1": "B1_bbr", "m2": "B2_integral", "m3": "B3_tau", "mSL": "B_SL"}
REPORT_COLUMNS = ("epsilon", "m1", "m2", "m3", "mSL", "mP", "err_max", "err_1", "err_inf", "err_2")


@dataclass
class TruncationReport:
    """Threshold bandwidths per bound family and for the exact decay."""

    rows: list[dict] = field(default_factory=list)

    def to_csv(self) -> str:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, (int, np.integer)):
                return str(int(v))
            return f"{v:.6e}"

        out = [",".join(REPORT_COLUMNS)]
        for row in self.rows:
            out.append(",".join(fmt(row.get(c)) for c in REPORT_COLUMNS))
        return "\n".join(out) + "\n"


def truncation_report(
    P: np.ndarray | None,
    decay: DecayProfile,
    bounds: Mapping[str, Sequence[float]],
    epsilons: Sequence[float],
    *,
    exact_2norm: bool = False,
) -> TruncationReport:
    """Tabulate ``m_i(eps)`` for each bound curve and ``m_P(eps)`` for the decay.

    ``m_i`` is the definitive crossing of the bound (:func:`first_below`);
    ``m_P`` is the truncation bandwidth of the exact profile
    (:func:`truncation_bandwidth`), so ``|P - P^(m_P)|_max <= eps``.
    ``bounds`` maps report columns (``m1``, ``m2``, ``m3``, ``mSL``) to curves
    indexed by ``k``.  A family whose curve never settles below ``eps`` on
    its range gets an empty cell.  Without the matrix ``P`` only ``err_max``
    (read off the profile) is filled in.
    """
    report = TruncationReport()
    for eps in epsilons:
        row: dict = {"epsilon": float(eps)}
        for col in ("m1", "m2", "m3", "mSL"):
            if col in bounds:
                try:
                    row[col] = first_below(bounds[col], eps)
                except ThresholdNotReachedError:
                    row[col] = None
        row["mP"] = truncation_bandwidth(decay.curve, eps)
        if P is not None:
            row.update(truncation_errors(P, row["mP"], exact_2norm=exact_2norm))
        else:
            tail = decay.curve[row["mP"] + 1:]
            row["err_max"] = float(tail.max()) if tail.size else 0.0
        report.rows.append(row)
    return report
