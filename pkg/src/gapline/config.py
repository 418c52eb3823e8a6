"""Experiment configuration: named presets and flat INI files.

See ``docs/config.md`` for every key.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .bounds import FAMILIES, K2_VARIANTS
from .errors import ParameterError, ValidationError
from .spectrum import DEFAULT_TOL_CLUSTER

DEFAULT_EPSILONS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
TARGETS = ("projector", "inverse")
MAX_DESK_N = 3000


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to rerun an experiment bit-for-bit.

    The spectrum comes from exactly one recipe: ``preset``, ``eigenvalues``
    or ``intervals`` (``(lo, hi, count)`` triples, uniform within each).
    """

    name: str = "custom"
    preset: str | None = None
    n: int | None = None
    m: int = 1
    seed: int = 0
    complex_: bool = False
    target: str = "projector"
    eigenvalues: tuple[float, ...] | None = None
    intervals: tuple[tuple[float, float, int], ...] | None = None
    mu: float = 0.0
    literal_formula: bool = False
    families: tuple[str, ...] = ("B1_bbr", "B2_integral", "B3_tau", "B_quadrature", "B_SL")
    k_max: int | None = None
    tol: float = 1e-10
    k2: str = "proof"
    tol_cluster: float = DEFAULT_TOL_CLUSTER
    sl_ells: tuple[int, ...] = ()
    epsilons: tuple[float, ...] = DEFAULT_EPSILONS
    out: str = "results"
    exact_2norm: bool = False
    plot: bool = True
    allow_large: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        recipes = [x is not None for x in (self.preset, self.eigenvalues, self.intervals)]
        if sum(recipes) != 1:
            raise ValidationError("give exactly one of preset, eigenvalues, intervals")
        if self.preset is not None and self.preset not in PRESETS:
            raise ValidationError(f"unknown preset {self.preset!r}; choose from {sorted(PRESETS)}")
        if self.m < 1:
            raise ParameterError(f"bandwidth must be >= 1, got {self.m}")
        unknown = set(self.families) - set(FAMILIES)
        if unknown:
            raise ParameterError(f"unknown families {sorted(unknown)}; choose from {FAMILIES}")
        if self.target not in TARGETS:
            raise ParameterError(f"target must be one of {TARGETS}")
        if self.k2 not in K2_VARIANTS:
            raise ParameterError(f"k2 must be one of {K2_VARIANTS}")
        if any(not 0 < e for e in self.epsilons):
            raise ParameterError("epsilons must be positive")

    def resolved_n(self) -> int:
        return len(self.spectrum())

    def check_size(self) -> None:
        n = self.resolved_n()
        if n > MAX_DESK_N and not self.allow_large:
            raise ValidationError(f"n={n} exceeds {MAX_DESK_N}; pass --allow-large to proceed")

    def spectrum(self) -> np.ndarray:
        """Prescribed eigenvalues, ascending."""
        if self.preset is not None:
            lam = PRESETS[self.preset].eigenvalues(self.n, literal=self.literal_formula)
        elif self.eigenvalues is not None:
            lam = np.asarray(self.eigenvalues, dtype=float)
        else:
            lam = uniform_on_intervals(self.intervals)
        if self.n is not None and self.preset is None and lam.size != self.n:
            raise ValidationError(f"n={self.n} but the recipe gives {lam.size} eigenvalues")
        return np.sort(lam)

    @classmethod
    def from_preset(cls, preset: str, /, **overrides) -> "ExperimentConfig":
        if preset not in PRESETS:
            raise ValidationError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        p = PRESETS[preset]
        base = cls(name=preset, preset=p.spectrum_name, m=p.m, families=p.families,
                   sl_ells=p.sl_ells, target=p.target, k_max=p.k_max)
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return replace(base, **overrides)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        with open(path) as fh:
            parser.read_file(fh)
        return cls.from_parser(parser)

    @classmethod
    def from_parser(cls, parser: configparser.ConfigParser) -> "ExperimentConfig":
        known = {
            "experiment": {"name", "preset", "n", "m", "seed", "complex", "target"},
            "spectrum": {"eigenvalues", "intervals", "mu", "literal_formula"},
            "bounds": {"families", "k_max", "tol", "k2", "tol_cluster", "sl_ells"},
            "report": {"epsilons", "out", "exact_2norm", "plot"},
        }
        for section in parser.sections():
            if section not in known:
                raise ValidationError(f"unknown config section [{section}]")
            extra = set(parser[section]) - known[section]
            if extra:
                raise ValidationError(f"unknown keys in [{section}]: {sorted(extra)}")

        def get(section, key, conv=str, default=None):
            if parser.has_option(section, key):
                raw = parser.get(section, key).strip()
                return conv(raw) if raw else default
            return default

        def getbool(section, key, default):
            if parser.has_option(section, key):
                return parser.getboolean(section, key)
            return default

        kw: dict = {}
        preset = get("experiment", "preset")
        for key, val in {
            "name": get("experiment", "name"),
            "n": get("experiment", "n", int),
            "m": get("experiment", "m", int),
            "seed": get("experiment", "seed", int),
            "complex_": getbool("experiment", "complex", None),
            "target": get("experiment", "target"),
            "eigenvalues": get("spectrum", "eigenvalues", _floats),
            "intervals": get("spectrum", "intervals", parse_intervals),
            "mu": get("spectrum", "mu", float),
            "literal_formula": getbool("spectrum", "literal_formula", None),
            "families": get("bounds", "families", _names),
            "k_max": get("bounds", "k_max", int),
            "tol": get("bounds", "tol", float),
            "k2": get("bounds", "k2"),
            "tol_cluster": get("bounds", "tol_cluster", float),
            "sl_ells": get("bounds", "sl_ells", _ints),
            "epsilons": get("report", "epsilons", _floats),
            "out": get("report", "out"),
            "exact_2norm": getbool("report", "exact_2norm", None),
            "plot": getbool("report", "plot", None),
        }.items():
            if val is not None:
                kw[key] = val
        if preset:
            return cls.from_preset(preset, **kw)
        return cls(**kw)

    def to_ini(self) -> str:
        """Round-trippable INI text (written next to every experiment's outputs)."""
        def join(xs):
            return ", ".join(repr(x) if isinstance(x, float) else str(x) for x in xs)

        lines = ["[experiment]", f"name = {self.name}"]
        if self.preset is not None:
            lines.append(f"preset = {self.preset}")
        if self.n is not None:
            lines.append(f"n = {self.n}")
        lines += [f"m = {self.m}", f"seed = {self.seed}",
                  f"complex = {str(self.complex_).lower()}", f"target = {self.target}",
                  "", "[spectrum]"]
        if self.eigenvalues is not None:
            lines.append(f"eigenvalues = {join(self.eigenvalues)}")
        if self.intervals is not None:
            lines.append("intervals = " + ", ".join(f"{lo!r}:{hi!r}:{c}" for lo, hi, c in self.intervals))
        lines += [f"mu = {self.mu!r}", f"literal_formula = {str(self.literal_formula).lower()}",
                  "", "[bounds]", f"families = {join(self.families)}"]
        if self.k_max is not None:
            lines.append(f"k_max = {self.k_max}")
        lines += [f"tol = {self.tol!r}", f"k2 = {self.k2}", f"tol_cluster = {self.tol_cluster!r}"]
        if self.sl_ells:
            lines.append(f"sl_ells = {join(self.sl_ells)}")
        lines += ["", "[report]", f"epsilons = {join(self.epsilons)}", f"out = {self.out}",
                  f"exact_2norm = {str(self.exact_2norm).lower()}",
                  f"plot = {str(self.plot).lower()}"]
        return "\n".join(lines) + "\n"


def _split(text: str) -> list[str]:
    return [tok for tok in text.replace(",", " ").split() if tok]


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in _split(text))


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in _split(text))


def _names(text: str) -> tuple[str, ...]:
    return tuple(_split(text))


def parse_intervals(text: str) -> tuple[tuple[float, float, int], ...]:
    """``"-1:-0.3:1000, 0.3:1:1000"`` -> ``((-1, -0.3, 1000), (0.3, 1, 1000))``."""
    out = []
    for tok in _split(text):
        parts = tok.split(":")
        if len(parts) != 3:
            raise ValidationError(f"interval {tok!r} is not lo:hi:count")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if not lo <= hi or count < 1:
            raise ValidationError(f"bad interval {tok!r}")
        out.append((lo, hi, count))
    return tuple(out)


def uniform_on_intervals(intervals: Sequence[tuple[float, float, int]]) -> np.ndarray:
    """Equispaced points (endpoints included) on each interval."""
    return np.concatenate([np.linspace(lo, hi, count) for lo, hi, count in intervals])


def _split_count(n: int, parts: int) -> list[int]:
    base, rem = divmod(n, parts)
    return [base + (i < rem) for i in range(parts)]


def clustered_magnitudes(count: int, *, literal: bool = False) -> np.ndarray:
    """``1 + 0.9 (u - 2 sqrt(u))`` on a grid of ``u`` from 1 down to 0.

    The magnitudes increase from 0.1 (clustered near the gap) to 1.  With
    ``literal`` the grid step is ``1/(2 count - 1)``, which stops ``u`` at
    about one half and the largest magnitude near 0.18.
    """
    i = np.arange(1, count + 1)
    denom = 2 * count - 1 if literal else count - 1
    u = 1.0 - (i - 1) / denom
    return 1.0 + 0.9 * (u - 2.0 * np.sqrt(u))


@dataclass(frozen=True)
class Preset:
    spectrum_name: str
    n: int
    m: int
    description: str
    families: tuple[str, ...]
    sl_ells: tuple[int, ...] = ()
    target: str = "projector"
    k_max: int | None = None

    def eigenvalues(self, n: int | None = None, *, literal: bool = False) -> np.ndarray:
        return _SPECTRA[self.spectrum_name](self.n if n is None else n, literal)


def _fig1(n, literal):
    lo, hi = _split_count(n, 2)
    return uniform_on_intervals([(-1.0, -0.3, lo), (0.3, 1.0, hi)])


def _fig2(n, literal):
    if n <= 12:
        raise ValidationError("fig2 needs n > 12")
    lo, hi = _split_count(n - 10, 2)
    return np.concatenate([np.full(10, -1.0),
                           uniform_on_intervals([(-0.5, -0.1, lo), (0.1, 0.5, hi)])])


def _fig3(n, literal):
    if n % 2:
        raise ValidationError("the symmetric clustered spectrum needs even n")
    mu = clustered_magnitudes(n // 2, literal=literal)
    return np.concatenate([-mu, mu])


def _fig4(n, literal):
    lo, hi = _split_count(n, 2)
    return uniform_on_intervals([(-0.5, -0.1, lo), (0.1, 1.0, hi)])


def _clustered_asymmetric(n, literal):
    i = np.arange(1, n + 1)
    u = 1.0 - (i - 1) / (n - 1)
    return (-1.0) ** i * (1.0 + 0.9 * (u - 2.0 * np.sqrt(u)))


def _spd_outlier(n, literal):
    return np.concatenate([np.linspace(1.0, 2.0, n - 1), [100.0]])


_SPECTRA = {
    "fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4,
    "clustered_asymmetric": _clustered_asymmetric, "spd_outlier": _spd_outlier,
}

_PROJ = ("B1_bbr", "B2_integral", "B3_tau", "B_quadrature", "B_SL")
PRESETS = {
    "fig1": Preset("fig1", 2000, 20, "uniform on [-1,-0.3] U [0.3,1], 20-banded", _PROJ),
    "table1": Preset("fig1", 2000, 20, "truncation bandwidths for the fig1 matrix",
                     ("B1_bbr", "B2_integral", "B3_tau", "B_SL")),
    "fig2": Preset("fig2", 2000, 20, "-1 (x10) plus uniform on [-0.5,-0.1] U [0.1,0.5]",
                   ("B2_integral", "B_SL"), sl_ells=(0, 1)),
    "fig3": Preset("fig3", 300, 1, "symmetric spectrum clustered at the gap, tridiagonal",
                   ("B2_integral", "B_SL"), sl_ells=tuple(range(51))),
    "fig4": Preset("fig4", 300, 1, "uniform on [-0.5,-0.1] U [0.1,1], tridiagonal",
                   ("rate_hasson", "rate_fuchs")),
    "clustered_asymmetric": Preset("clustered_asymmetric", 300, 1,
                                   "alternating-sign clustered spectrum, tridiagonal",
                                   ("B2_integral", "B_SL")),
    "spd_outlier": Preset("spd_outlier", 200, 2, "199 eigenvalues in [1,2] plus 100",
                          ("inv_demko", "inv_frommer", "inv_refined"), target="inverse"),
}
REPRODUCIBLE = ("fig1", "fig2", "fig3", "fig4", "table1")
