"""Spectral geometry of a gapped Hermitian matrix.

A spectrum ``[b1_raw, a1] U [a2, b2_raw]`` is shifted (and optionally scaled)
so that the gap is centred at zero: ``x -> scale*x + shift``.  After that the
spectrum lies in ``[-b1, -a] U [a, b2]`` and the projector onto the negative
eigenvalues is the projector onto the original lower interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import GapGeometryError, SpectrumViolationError, VanishingGapError

DEFAULT_TOL_CLUSTER = 1e-10
_SPEC_KEYS = ("a", "b", "b1", "b2", "mu", "scale", "shift")


@dataclass(frozen=True)
class SpectrumSpec:
    """Normalized gap geometry; ``spectrum ⊂ [-b1, -a] U [a, b2]``."""

    a: float
    b1: float
    b2: float
    mu: float = 0.0
    scale: float = 1.0
    shift: float = 0.0
    gamma: float = field(init=False)

    def __post_init__(self):
        if not (0 < self.a < min(self.b1, self.b2)):
            raise GapGeometryError(
                f"need 0 < a < min(b1, b2); got a={self.a}, b1={self.b1}, b2={self.b2}"
            )
        if self.scale <= 0:
            raise GapGeometryError("scale must be positive")
        # Relative gap; diagnostic only.
        object.__setattr__(self, "gamma", 2 * self.a / (self.b1 + self.b2))

    @property
    def b(self) -> float:
        return max(self.b1, self.b2)

    @property
    def affine(self) -> tuple[float, float]:
        return (self.scale, self.shift)

    @classmethod
    def symmetric(cls, a: float, b: float) -> "SpectrumSpec":
        return cls(a=a, b1=b, b2=b)

    def apply(self, x):
        """Map raw eigenvalues (or a raw matrix's diagonal shift) to normalized ones."""
        return self.scale * np.asarray(x) + self.shift

    def invert(self, y):
        return (np.asarray(y) - self.shift) / self.scale

    def raw_endpoints(self) -> tuple[float, float, float, float]:
        """The original ``(b1_raw, a1, a2, b2_raw)``."""
        return tuple(float(v) for v in self.invert([-self.b1, -self.a, self.a, self.b2]))

    def to_mapping(self) -> dict[str, float]:
        return {
            "a": self.a, "b": self.b, "b1": self.b1, "b2": self.b2,
            "mu": self.mu, "scale": self.scale, "shift": self.shift,
        }

    def to_text(self) -> str:
        return "".join(f"{k} = {v!r}\n" for k, v in self.to_mapping().items())

    @classmethod
    def from_mapping(cls, values: Mapping[str, object]) -> "SpectrumSpec":
        missing = {"a", "b1", "b2"} - set(values)
        if missing:
            # Symmetric shorthand: only a and b given.
            if {"a", "b"} <= set(values) and missing <= {"b1", "b2"}:
                values = {**values, "b1": values.get("b1", values["b"]),
                          "b2": values.get("b2", values["b"])}
            else:
                raise GapGeometryError(f"missing spectrum keys: {sorted(missing)}")
        spec = cls(
            a=float(values["a"]),
            b1=float(values["b1"]),
            b2=float(values["b2"]),
            mu=float(values.get("mu", 0.0)),
            scale=float(values.get("scale", 1.0)),
            shift=float(values.get("shift", 0.0)),
        )
        if "b" in values and not np.isclose(float(values["b"]), spec.b, rtol=1e-12, atol=0):
            raise GapGeometryError(f"b={values['b']} inconsistent with max(b1, b2)={spec.b}")
        return spec

    @classmethod
    def from_text(cls, text: str) -> "SpectrumSpec":
        values = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            key = key.strip()
            if key in _SPEC_KEYS:
                values[key] = val.strip()
        return cls.from_mapping(values)


def normalize_spectrum(
    b1_raw: float,
    a1: float,
    a2: float,
    b2_raw: float,
    mu_raw: float,
    *,
    scale_to_unit: bool = False,
) -> SpectrumSpec:
    """Centre the gap ``(a1, a2)`` at zero.

    The shift is ``-(a1 + a2)/2``.  With ``scale_to_unit`` the spectrum is
    also scaled so that ``max(b1, b2) == 1``.  The returned spec has
    ``mu == 0``: any split point inside the gap gives the same projector.
    """
    if a2 == a1:
        raise VanishingGapError(f"gap endpoints coincide at {a1}")
    if not (b1_raw < a1 < mu_raw < a2 < b2_raw):
        raise GapGeometryError(
            "need b1_raw < a1 < mu_raw < a2 < b2_raw; got "
            f"{(b1_raw, a1, mu_raw, a2, b2_raw)}"
        )
    centre = 0.5 * (a1 + a2)
    scale = 1.0
    if scale_to_unit:
        scale = 1.0 / max(centre - b1_raw, b2_raw - centre)
    if scale == 1.0:
        # Unscaled path avoids multiplying by 1.0; "+ 0.0" turns -0.0 into 0.0.
        return SpectrumSpec(
            a=0.5 * (a2 - a1), b1=centre - b1_raw, b2=b2_raw - centre,
            mu=0.0, scale=1.0, shift=-centre + 0.0,
        )
    return SpectrumSpec(
        a=0.5 * scale * (a2 - a1),
        b1=scale * (centre - b1_raw),
        b2=scale * (b2_raw - centre),
        mu=0.0,
        scale=scale,
        shift=-scale * centre,
    )


def spectrum_from_eigenvalues(eigenvalues: Iterable[float], mu: float = 0.0, **kw) -> SpectrumSpec:
    """Tightest two-interval geometry enclosing ``eigenvalues`` split at ``mu``."""
    lam = np.sort(np.asarray(list(eigenvalues), dtype=float))
    lower, upper = lam[lam < mu], lam[lam > mu]
    if lower.size == 0 or upper.size == 0:
        raise GapGeometryError("eigenvalues must lie on both sides of mu")
    if lower.size + upper.size != lam.size:
        raise SpectrumViolationError(f"eigenvalue equal to mu={mu}")
    return normalize_spectrum(lower[0], lower[-1], upper[0], upper[-1], mu, **kw)


@dataclass(frozen=True)
class EigenvalueLadder:
    """Distinct eigenvalue magnitudes ``mu_1 < ... < mu_nu`` with multiplicities."""

    mags: tuple[float, ...]
    mults: tuple[int, ...]
    n_e: int
    tol_cluster: float = DEFAULT_TOL_CLUSTER
    merged: bool = False  # True if the tolerance merged numerically distinct values

    @property
    def nu(self) -> int:
        return len(self.mags)

    @property
    def n(self) -> int:
        return int(sum(self.mults))

    def b(self, ell: int) -> float:
        """``b_ell = mu_{nu - ell}``: the largest magnitude after dropping ``ell`` levels."""
        if not 0 <= ell < self.nu:
            raise IndexError(f"ell must lie in 0..{self.nu - 1}, got {ell}")
        return self.mags[self.nu - 1 - ell]

    def b_values(self) -> np.ndarray:
        """All ``b_ell`` for ``ell = 0..nu-1`` (non-increasing)."""
        return np.asarray(self.mags[::-1])


def distinct_magnitudes(
    eigenvalues: Iterable[float],
    tol_cluster: float = DEFAULT_TOL_CLUSTER,
    *,
    a: float | None = None,
) -> EigenvalueLadder:
    """Group ``|lambda|`` into distinct levels.

    Consecutive sorted magnitudes closer than ``tol_cluster * max|lambda|``
    are merged (single linkage); each level is represented by its largest
    member so that ``b_ell`` never underestimates the true level.
    """
    lam = np.asarray(list(eigenvalues), dtype=float)
    if lam.size == 0:
        raise SpectrumViolationError("empty eigenvalue list")
    mags = np.abs(lam)
    floor = 0.0 if a is None else a * (1 - 1e-12)
    if np.any(mags <= 0) or np.any(mags < floor):
        raise SpectrumViolationError(
            f"eigenvalue magnitude {mags.min()!r} below gap half-width {a!r}"
        )
    mags.sort()
    thresh = tol_cluster * mags[-1]
    breaks = np.nonzero(np.diff(mags) > thresh)[0]
    starts = np.concatenate([[0], breaks + 1])
    stops = np.concatenate([breaks + 1, [mags.size]])
    levels = tuple(float(mags[s - 1]) for s in stops)
    counts = tuple(int(e - s) for s, e in zip(starts, stops))
    merged = any(mags[e - 1] != mags[s] for s, e in zip(starts, stops))
    return EigenvalueLadder(
        mags=levels, mults=counts, n_e=int(np.sum(lam < 0)),
        tol_cluster=tol_cluster, merged=merged,
    )
