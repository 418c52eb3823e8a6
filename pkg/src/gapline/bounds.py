"""Decay bounds for inverses, sign functions and spectral projectors of banded matrices.

Every bound is a function of the distance ``k = |i - j|`` from the diagonal
and the bandwidth ``m``.  Projector bounds assume the spectrum lies in
``[-b, -a] U [a, b]`` and the split point is zero; sign-function bounds are
twice the projector ones.  Projector bounds below ``k = m`` are replaced by
the trivial bound 1 (``|P_ij| <= 1`` because ``P`` is an orthogonal projector).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, ParameterError, QuadratureError, SpectrumViolationError
from .quadrature import DEFAULT_TOL, integrate_semi_infinite, integrate_sqrt_singular
from .spectrum import EigenvalueLadder, distinct_magnitudes

FAMILIES = (
    "B1_bbr", "B2_integral", "B3_tau", "B_quadrature", "B_SL",
    "inv_demko", "inv_frommer", "inv_refined", "rate_hasson", "rate_fuchs",
)
PROJECTOR_FAMILIES = ("B1_bbr", "B2_integral", "B3_tau", "B_quadrature", "B_SL")
K2_VARIANTS = ("proof", "printed")

GRID_POINTS = 64
GRID_INSET = 1e-6
GOLDEN_RTOL = 1e-8
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _check_gap(a: float, b: float) -> None:
    if not (0 < a < b):
        raise DomainError(f"need 0 < a < b, got a={a}, b={b}")


# --------------------------------------------------------------------------
# Inverse of a positive definite matrix
# --------------------------------------------------------------------------


class DemkoParams(NamedTuple):
    """Constants of the best uniform approximation of ``1/x`` on ``[a, b]``."""

    r: float
    C: float
    q: float

    def best_error(self, k):
        """``E_k(1/x, [a, b]) = C q**(k+1)``."""
        return self.C * self.q ** (np.asarray(k) + 1)


def demko_params(a: float, b: float) -> DemkoParams:
    _check_gap(a, b)
    r = b / a
    s = math.sqrt(r)
    return DemkoParams(r=r, C=(1 + s) ** 2 / (2 * b), q=(s - 1) / (s + 1))


def inverse_bound_demko(a: float, b: float, m: int, k: int) -> float:
    """``|A^{-1}_ij| <= C q**(k/m)`` for ``k = |i-j| >= 1``."""
    if k < 1:
        raise ParameterError("the off-diagonal bound needs k >= 1")
    r, C, q = demko_params(a, b)
    return C * q ** (k / m)


def _inverse_ell_max(k: int, m: int) -> int:
    # Degree of the polynomial that vanishes at entry (i, j) is ceil(k/m) - 1.
    return max(-(-k // m) - 1, 0)


def _rate(r: np.ndarray) -> np.ndarray:
    s = np.sqrt(r)
    return (s - 1) / (s + 1)


def inverse_bound_frommer(lambdas: Sequence[float], m: int, k: int, ell: int) -> float:
    """Bound that discards the ``ell`` largest eigenvalues (counted with multiplicity)."""
    lam = np.sort(np.asarray(lambdas, dtype=float))
    if lam[0] <= 0:
        raise DomainError("matrix must be positive definite")
    if not (0 <= ell <= k // m and ell < lam.size):
        raise ParameterError(f"ell={ell} outside 0..{min(k // m, lam.size - 1)}")
    q = _rate(lam[lam.size - 1 - ell] / lam[0])
    return float(2.0 / lam[0] * q ** (k / m - ell))


def inverse_bound_frommer_opt(lambdas: Sequence[float], m: int, k: int) -> tuple[float, int]:
    lam = np.sort(np.asarray(lambdas, dtype=float))
    if lam[0] <= 0:
        raise DomainError("matrix must be positive definite")
    ells = np.arange(min(_inverse_ell_max(k, m), lam.size - 1) + 1)
    q = _rate(lam[lam.size - 1 - ells] / lam[0])
    vals = 2.0 / lam[0] * q ** (k / m - ells)
    i = int(np.argmin(vals))
    return float(vals[i]), int(ells[i])


def _levels(levels: EigenvalueLadder | Sequence[float]) -> np.ndarray:
    if isinstance(levels, EigenvalueLadder):
        return np.asarray(levels.mags)
    lam = np.asarray(levels, dtype=float)
    if np.any(lam <= 0):
        raise DomainError("matrix must be positive definite")
    return np.asarray(distinct_magnitudes(lam).mags)


def _refined_terms(mu: np.ndarray, ells: np.ndarray):
    top = mu[mu.size - 1 - ells]
    r = top / mu[0]
    return (1 + np.sqrt(r)) ** 2 / (2 * top), _rate(r)


def inverse_bound_refined(levels, m: int, k: int, ell: int) -> float:
    """Refined bound over the *distinct* eigenvalues ``lam_1 < ... < lam_nu``.

    ``levels`` is an :class:`EigenvalueLadder` or a list of eigenvalues
    (duplicates are merged).
    """
    mu = _levels(levels)
    if not (0 <= ell <= k // m and ell < mu.size):
        raise ParameterError(f"ell={ell} outside 0..{min(k // m, mu.size - 1)}")
    C, q = _refined_terms(mu, np.array([ell]))
    return float(C[0] * q[0] ** (k / m - ell))


def inverse_bound_refined_opt(levels, m: int, k: int) -> tuple[float, int]:
    mu = _levels(levels)
    ells = np.arange(min(_inverse_ell_max(k, m), mu.size - 1) + 1)
    C, q = _refined_terms(mu, ells)
    vals = C * q ** (k / m - ells)
    i = int(np.argmin(vals))
    return float(vals[i]), int(ells[i])


# --------------------------------------------------------------------------
# One-dimensional optimizer shared by the xi- and tau-families
# --------------------------------------------------------------------------


def _golden(f: Callable[[float], float], lo: float, hi: float, rtol: float) -> tuple[float, float]:
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > rtol * max(abs(lo), abs(hi)):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def minimize_on_interval(
    log_objective: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    *,
    points: int = GRID_POINTS,
    inset: float = GRID_INSET,
    rtol: float = GOLDEN_RTOL,
) -> tuple[float, float]:
    """Minimize over the open interval ``(lo, hi)``; returns ``(argmin, min)``.

    A log-spaced grid in the distance from ``lo`` (endpoints inset by
    ``inset`` times the length) locates the basin, golden-section search
    refines it.  ``log_objective`` must accept arrays.
    """
    L = hi - lo
    grid = lo + np.geomspace(inset * L, (1 - inset) * L, points)
    vals = log_objective(grid)
    i = int(np.nanargmin(vals))
    left = grid[max(i - 1, 0)]
    right = grid[min(i + 1, points - 1)]
    x, fx = _golden(lambda t: float(log_objective(np.array([t]))[0]), left, right, rtol)
    if fx <= vals[i]:
        return float(x), float(fx)
    return float(grid[i]), float(vals[i])


# --------------------------------------------------------------------------
# Projector bounds from the BBR polynomial construction (family B1)
# --------------------------------------------------------------------------


def xi_bar(a: float, b: float) -> float:
    _check_gap(a, b)
    return (b + a) / (b - a)


def _log_bbr(a, b, m, k, xi):
    xi = np.asarray(xi, dtype=float)
    z0 = ((b * b + a * a) / (b * b - a * a) - (xi * xi + 1) / (2 * xi)) * (b * b - a * a) / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (np.log(2 * b * xi) - 0.5 * np.log(z0) - np.log(xi - 1)
               - (k / (2 * m)) * np.log(xi))
    return np.where(z0 > 0, out, np.inf)


def proj_bound_bbr(a: float, b: float, m: int, k: int, xi: float) -> float:
    """``2 b xi M(xi) / (xi - 1) * xi**(-k/(2m))`` for ``1 < xi < (b+a)/(b-a)``."""
    top = xi_bar(a, b)
    if not 1 < xi < top:
        raise ParameterError(f"xi={xi} outside (1, {top})")
    return float(np.exp(_log_bbr(a, b, m, k, xi)))


def proj_bound_bbr_opt(a: float, b: float, m: int, k: int) -> tuple[float, float]:
    """Infimum over ``xi``; returns ``(value, xi_star)``."""
    top = xi_bar(a, b)
    xi, lv = minimize_on_interval(lambda x: _log_bbr(a, b, m, k, x), 1.0, top)
    return float(np.exp(lv)), xi


# --------------------------------------------------------------------------
# Integral-representation bounds (families B2, quadrature, B3)
# --------------------------------------------------------------------------


def q_of_t(a: float, b: float, t):
    """Rate ``q(t)`` of ``1/x`` on ``[a^2 + t^2, b^2 + t^2]``, cancellation-free."""
    t2 = np.square(t)
    sb, sa = np.sqrt(b * b + t2), np.sqrt(a * a + t2)
    return (b * b - a * a) / (sb + sa) ** 2


def C_of_t(a: float, b: float, t):
    """Constant ``C(t)`` of ``1/x`` on ``[a^2 + t^2, b^2 + t^2]``."""
    t2 = np.square(t)
    sb2, sa2 = b * b + t2, a * a + t2
    return (np.sqrt(sb2) + np.sqrt(sa2)) ** 2 / (2 * sb2 * sa2)


def integral_constants(a: float, b: float) -> tuple[float, float]:
    """``(C_hat, q_hat)`` of the projector bound: ``(1/4)(1+sqrt(b/a))^2`` and ``(b-a)/(b+a)``."""
    _check_gap(a, b)
    return 0.25 * (1 + math.sqrt(b / a)) ** 2, (b - a) / (b + a)


def proj_bound_integral(a: float, b: float, m: int, k: int, *, raw: bool = False) -> float:
    """Closed-form projector bound ``C_hat q_hat**(k/(2m) - 1/2)``.

    Returns 1 for ``k < m`` unless ``raw`` asks for the formula value.
    """
    C, q = integral_constants(a, b)
    if k < m and not raw:
        return 1.0
    return C * q ** (k / (2 * m) - 0.5)


def sign_bound_integral(a: float, b: float, m: int, k: int) -> float:
    return 2.0 * proj_bound_integral(a, b, m, k, raw=True)


def sign_bound_quadrature_result(a: float, b: float, m: int, k: int, tol: float = DEFAULT_TOL):
    """Quadrature of ``(2b/pi) int_0^inf C(t) q(t)**alpha dt`` with ``alpha = k/(2m) - 1/2``."""
    _check_gap(a, b)
    if k < m:
        raise ParameterError(f"the integral bound needs k >= m, got k={k}, m={m}")
    alpha = k / (2 * m) - 0.5

    def integrand(t):
        return C_of_t(a, b, t) * np.exp(alpha * np.log(q_of_t(a, b, t)))

    res = integrate_semi_infinite(integrand, tol, scale=math.sqrt(a * b))
    factor = 2 * b / math.pi
    return type(res)(factor * res.value, factor * res.est_error, res.evaluations, res.converged)


def sign_bound_quadrature(a: float, b: float, m: int, k: int, tol: float = DEFAULT_TOL) -> float:
    return sign_bound_quadrature_result(a, b, m, k, tol).value


def constant_integral(a: float, b: float, tol: float = DEFAULT_TOL) -> float:
    """``(2b/pi) int_0^inf C(t) dt``; never exceeds ``(1/2)(1 + sqrt(b/a))^2``."""
    _check_gap(a, b)
    res = integrate_semi_infinite(lambda t: C_of_t(a, b, t), tol, scale=math.sqrt(a * b))
    return 2 * b / math.pi * res.value


class GaussianConstants(NamedTuple):
    C1: float
    C2: float
    tau_bar: float


def gaussian_constants(a: float, b: float) -> GaussianConstants:
    _check_gap(a, b)
    C1 = 1.0 / (2 * a * b)
    C2 = (a * a + a * b + b * b) / (8 * a**3 * b**3)
    return GaussianConstants(C1, C2, math.sqrt(C1 / C2))


def gaussian_majorant(a: float, b: float, tau: float, alpha: float, t):
    """``exp(-alpha t^2 (C1 - tau^2 C2)) q(0)**alpha``, an upper bound for ``q(t)**alpha`` on ``[0, tau]``."""
    C1, C2, tbar = gaussian_constants(a, b)
    if not 0 <= tau < tbar:
        raise ParameterError(f"tau={tau} outside [0, {tbar})")
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > tau)):
        raise ParameterError("t must lie in [0, tau]")
    return np.exp(-alpha * t * t * (C1 - tau * tau * C2)) * q_of_t(a, b, 0.0) ** alpha


def tau_constants(a: float, b: float, tau, k2: str = "proof"):
    """``K1(tau)`` and ``K2`` of the two-term bound.

    ``k2="proof"`` uses ``(1/2)(1 + sqrt(b/a))^2``, the constant the
    derivation actually produces; ``"printed"`` uses the smaller
    ``(1/2)(1 + sqrt(b/a))^(1/2)``.
    """
    if k2 not in K2_VARIANTS:
        raise ParameterError(f"k2 must be one of {K2_VARIANTS}")
    C1, C2, _ = gaussian_constants(a, b)
    tau = np.asarray(tau, dtype=float)
    K1 = math.sqrt(2 / math.pi) * (1 + b / a) ** 2 / np.sqrt(C1 - tau * tau * C2)
    K2 = 0.5 * (1 + math.sqrt(b / a)) ** (2.0 if k2 == "proof" else 0.5)
    return K1, K2


def _log_tau(a, b, m, k, tau, k2):
    K1, K2 = tau_constants(a, b, tau, k2)
    alpha = k / (2 * m) - 0.5
    first = np.log(K1) - 0.5 * math.log(k / m - 1) + alpha * math.log(q_of_t(a, b, 0.0))
    second = math.log(K2) + alpha * np.log(q_of_t(a, b, tau))
    return math.log(0.5) + np.logaddexp(first, second)


def proj_bound_tau(a: float, b: float, m: int, k: int, tau: float, *, k2: str = "proof") -> float:
    """Two-term projector bound for ``k > m`` and ``0 < tau < tau_bar``.

    The constant ``K1`` carries a factor ``b``, so unlike the other
    families this one is not invariant under scaling of the spectrum;
    evaluate it on a spectrum normalized to ``max(b1, b2) = 1``.
    """
    _, _, tbar = gaussian_constants(a, b)
    if not 0 < tau < tbar:
        raise ParameterError(f"tau={tau} outside (0, {tbar})")
    if k <= m:
        raise ParameterError("the two-term bound needs k > m")
    return float(np.exp(_log_tau(a, b, m, k, tau, k2)))


def proj_bound_tau_opt(a: float, b: float, m: int, k: int, *, k2: str = "proof") -> tuple[float, float]:
    """Minimum over ``tau``; returns ``(value, tau_star)``."""
    _, _, tbar = gaussian_constants(a, b)
    if k <= m:
        raise ParameterError("the two-term bound needs k > m")
    tau, lv = minimize_on_interval(lambda t: _log_tau(a, b, m, k, t, k2), 0.0, tbar)
    return float(np.exp(lv)), tau


def sign_bound_tau_opt(a: float, b: float, m: int, k: int, *, k2: str = "proof") -> tuple[float, float]:
    value, tau = proj_bound_tau_opt(a, b, m, k, k2=k2)
    return 2.0 * value, tau


# --------------------------------------------------------------------------
# Bounds that use the eigenvalue distribution (family B_SL)
# --------------------------------------------------------------------------


def sl_constants(ladder: EigenvalueLadder, a: float) -> tuple[np.ndarray, np.ndarray]:
    """``(C_hat_ell, q_hat_ell)`` for ``ell = 0..nu-1``."""
    if ladder.mags[0] < a * (1 - 1e-12):
        raise SpectrumViolationError(f"smallest magnitude {ladder.mags[0]} below a={a}")
    bl = ladder.b_values()
    return 0.25 * (1 + np.sqrt(bl / a)) ** 2, (bl - a) / (bl + a)


def _sl_ell_max(ladder: EigenvalueLadder, m: int, k: int) -> int:
    return min(math.floor(k / (2 * m) - 0.5), ladder.nu - 1)


def _sl_values(C, q, m, k, ells):
    expo = k / (2 * m) - 0.5 - ells
    with np.errstate(divide="ignore", invalid="ignore"):
        logq = np.log(q[ells])
        # 0**0 = 1 when b_ell collapses onto a.
        return C[ells] * np.exp(np.where(expo == 0, 0.0, expo * logq))


def proj_bound_sl(ladder: EigenvalueLadder, a: float, m: int, k: int, ell: int) -> float:
    """``C_hat_ell q_hat_ell**(k/(2m) - 1/2 - ell)`` with ``b_ell`` from the ladder."""
    top = _sl_ell_max(ladder, m, k)
    if not 0 <= ell <= top:
        raise ParameterError(f"ell={ell} outside 0..{top}")
    C, q = sl_constants(ladder, a)
    return float(_sl_values(C, q, m, k, np.array([ell]))[0])


def proj_bound_sl_opt(ladder: EigenvalueLadder, a: float, m: int, k: int) -> tuple[float, int]:
    """Exhaustive minimum over admissible ``ell``; ``(1.0, -1)`` when none is admissible."""
    top = _sl_ell_max(ladder, m, k)
    if top < 0:
        return 1.0, -1
    C, q = sl_constants(ladder, a)
    vals = _sl_values(C, q, m, k, np.arange(top + 1))
    i = int(np.argmin(vals))
    return float(vals[i]), i


def sl_fixed_ell_curve(ladder: EigenvalueLadder, a: float, m: int, ks: Sequence[int], ell: int) -> np.ndarray:
    """``proj_bound_sl`` at a fixed ``ell`` over ``ks`` (``nan`` where ``ell`` is inadmissible)."""
    C, q = sl_constants(ladder, a)
    out = np.full(len(ks), np.nan)
    if ell >= ladder.nu:
        return out
    for i, k in enumerate(ks):
        if ell <= _sl_ell_max(ladder, m, int(k)):
            out[i] = _sl_values(C, q, m, int(k), np.array([ell]))[0]
    return out


# --------------------------------------------------------------------------
# Asymptotic rates with unknown constants set to one
# --------------------------------------------------------------------------


def hasson_rate(a: float, b: float, m: int, k: int) -> float:
    """``(k/m - 1)**(-1/2) q_hat**(k/(2m) - 1/2)``."""
    _check_gap(a, b)
    if k <= m:
        raise DomainError("rate is defined for k > m")
    q = (b - a) / (b + a)
    return (k / m - 1) ** -0.5 * q ** (k / (2 * m) - 0.5)


@dataclass(frozen=True)
class FuchsRate:
    eta: float
    K: float
    est_error: float

    def shape(self, m: int, k: int) -> float:
        """Entry-decay shape ``d**(-1/2) exp(-eta d)`` at degree ``d = k/m - 1``."""
        if k <= m:
            raise DomainError("rate is defined for k > m")
        d = k / m - 1
        return d ** -0.5 * math.exp(-self.eta * d)


def fuchs_rate(a: float, b1: float, b2: float, tol: float = DEFAULT_TOL) -> FuchsRate:
    """Asymptotic rate ``eta`` of best approximation of sign on ``[-b1,-a] U [a,b2]``.

    The cubic under the square root is negative on ``(-1, 1)``; its absolute
    value is used.  The weight ``(1 - x^2)^(-1/2)`` is handled by the
    singular quadrature, the remaining factor ``((x + b1/a)(b2/a - x))^(-1/2)``
    is smooth on ``[-1, 1]``.
    """
    if not (0 < a < min(b1, b2)):
        raise DomainError(f"need 0 < a < min(b1, b2), got {(a, b1, b2)}")
    lo_root, hi_root = b1 / a, b2 / a

    def smooth(x):
        return 1.0 / np.sqrt((x + lo_root) * (hi_root - x))

    den = integrate_sqrt_singular(smooth, -1.0, 1.0, ("lo", "hi"), tol)
    num = integrate_sqrt_singular(lambda x: x * smooth(x), -1.0, 1.0, ("lo", "hi"), tol,
                                  abs_tol=tol * den.value)
    K = num.value / den.value
    dK = (num.est_error + abs(K) * den.est_error) / den.value

    def one_sided(x):
        return smooth(x) / np.sqrt(1.0 - x)

    eta = integrate_sqrt_singular(lambda x: (K - x) * one_sided(x), -1.0, K, "lo", tol)
    slope = integrate_sqrt_singular(one_sided, -1.0, K, "lo", tol)
    if not (den.converged and num.converged and eta.converged and slope.converged):
        raise QuadratureError("rate integrals did not converge")
    return FuchsRate(eta=eta.value, K=K, est_error=eta.est_error + slope.value * dK)


# --------------------------------------------------------------------------
# Curves over k
# --------------------------------------------------------------------------


@dataclass
class BoundCurve:
    """Values of one family on a grid of distances ``k``.

    ``raw`` is the formula value (``inf`` where the formula is undefined),
    ``capped`` applies the trivial bound 1 for projector families, ``param``
    holds the optimizing xi/tau/ell per ``k`` (``nan`` if not optimized).
    """

    family: str
    ks: np.ndarray
    raw: np.ndarray
    capped: np.ndarray
    param: np.ndarray
    params: dict = field(default_factory=dict)

    def value_at(self, k: int) -> float:
        return float(self.capped[np.searchsorted(self.ks, k)])

    def dense(self, n: int, fill: float = np.nan) -> np.ndarray:
        """Capped values on ``k = 0..n-1`` (``fill`` where not sampled)."""
        out = np.full(n, fill)
        sel = self.ks < n
        out[self.ks[sel]] = self.capped[sel]
        return out

    def to_csv(self) -> str:
        def fmt(v):
            return "" if np.isnan(v) else f"{v:.17g}"

        lines = ["k,raw,capped,param"]
        for k, r, c, p in zip(self.ks, self.raw, self.capped, self.param):
            lines.append(f"{int(k)},{r:.17g},{c:.17g},{fmt(p)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, family: str, text: str) -> "BoundCurve":
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        ks = np.array([int(r[0]) for r in rows])
        raw = np.array([float(r[1]) for r in rows])
        capped = np.array([float(r[2]) for r in rows])
        param = np.array([float(r[3]) if r[3] else np.nan for r in rows])
        return cls(family, ks, raw, capped, param)


def bound_curve(
    family: str,
    ks: Sequence[int],
    *,
    a: float | None = None,
    b: float | None = None,
    m: int = 1,
    ladder: EigenvalueLadder | None = None,
    eigenvalues: Sequence[float] | None = None,
    b1: float | None = None,
    b2: float | None = None,
    tol: float = DEFAULT_TOL,
    k2: str = "proof",
) -> BoundCurve:
    """Evaluate one family on ``ks``.

    Projector families need ``a``, ``b`` (and ``ladder`` for ``B_SL``);
    inverse families need the positive ``eigenvalues``; ``rate_fuchs``
    needs ``b1``/``b2`` (defaulting to ``b``).  ``B_quadrature`` is stored
    at projector scale, i.e. half the sign-function integral.
    """
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}; choose from {FAMILIES}")
    ks = np.asarray(ks, dtype=int)
    raw = np.full(ks.size, np.inf)
    param = np.full(ks.size, np.nan)
    params: dict = {"m": m}

    if family in PROJECTOR_FAMILIES or family.startswith("rate"):
        if a is None or b is None:
            raise ParameterError(f"{family} needs a and b")
        _check_gap(a, b)
        params.update(a=a, b=b)

    if family == "B1_bbr":
        params["xi_bar"] = xi_bar(a, b)
        for i, k in enumerate(ks):
            raw[i], param[i] = proj_bound_bbr_opt(a, b, m, int(k))
    elif family == "B2_integral":
        params["C_hat"], params["q_hat"] = integral_constants(a, b)
        raw[:] = [proj_bound_integral(a, b, m, int(k), raw=True) for k in ks]
    elif family == "B3_tau":
        C1, C2, tbar = gaussian_constants(a, b)
        params.update(C1=C1, C2=C2, tau_bar=tbar, K2=tau_constants(a, b, 0.0, k2)[1], k2=k2)
        for i, k in enumerate(ks):
            if k > m:
                raw[i], param[i] = proj_bound_tau_opt(a, b, m, int(k), k2=k2)
    elif family == "B_quadrature":
        params["tol"] = tol
        for i, k in enumerate(ks):
            if k >= m:
                raw[i] = 0.5 * sign_bound_quadrature(a, b, m, int(k), tol)
    elif family == "B_SL":
        if ladder is None:
            raise ParameterError("B_SL needs an eigenvalue ladder")
        params.update(nu=ladder.nu, tol_cluster=ladder.tol_cluster, merged=ladder.merged)
        for i, k in enumerate(ks):
            value, ell = proj_bound_sl_opt(ladder, a, m, int(k))
            if ell >= 0:
                raw[i], param[i] = value, ell
    elif family in ("inv_demko", "inv_frommer", "inv_refined"):
        if eigenvalues is None:
            raise ParameterError(f"{family} needs the eigenvalues")
        lam = np.sort(np.asarray(eigenvalues, dtype=float))
        params.update(lambda_min=float(lam[0]), lambda_max=float(lam[-1]))
        levels = distinct_magnitudes(lam) if family == "inv_refined" else None
        for i, k in enumerate(ks):
            if k < 1:
                continue
            if family == "inv_demko":
                raw[i] = inverse_bound_demko(lam[0], lam[-1], m, int(k))
            elif family == "inv_frommer":
                raw[i], param[i] = inverse_bound_frommer_opt(lam, m, int(k))
            else:
                raw[i], param[i] = inverse_bound_refined_opt(levels, m, int(k))
    elif family == "rate_hasson":
        raw[:] = [hasson_rate(a, b, m, int(k)) if k > m else np.nan for k in ks]
    elif family == "rate_fuchs":
        rate = fuchs_rate(a, b1 if b1 is not None else b, b2 if b2 is not None else b, tol)
        params.update(eta=rate.eta, K=rate.K, est_error=rate.est_error)
        raw[:] = [rate.shape(m, int(k)) if k > m else np.nan for k in ks]

    if family in PROJECTOR_FAMILIES:
        capped = np.minimum(raw, 1.0)
        capped[ks < m] = 1.0
    else:
        capped = raw.copy()
    return BoundCurve(family, ks, raw, capped, param, params)
