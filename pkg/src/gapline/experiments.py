"""End-to-end experiment: generate, project, measure, bound, compare, write."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .bounds import PROJECTOR_FAMILIES, BoundCurve, bound_curve, sl_fixed_ell_curve
from .config import ExperimentConfig
from .errors import DomainError
from .factory import BandedHermitian, SeededRng, generate
from .projector import (
    REPORT_FAMILIES,
    DecayProfile,
    TruncationReport,
    bound_violations,
    decay_profile,
    roundoff_floor,
    spectral_projector,
    truncation_report,
)
from .spectrum import EigenvalueLadder, SpectrumSpec, distinct_magnitudes, spectrum_from_eigenvalues

log = logging.getLogger(__name__)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    H: BandedHermitian
    decay: DecayProfile
    curves: dict[str, BoundCurve]
    violations: dict[str, np.ndarray]
    diagnostics: dict[str, float]
    spec: SpectrumSpec | None = None
    ladder: EigenvalueLadder | None = None
    report: TruncationReport | None = None
    sl_by_ell: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def ks(self) -> np.ndarray:
        return next(iter(self.curves.values())).ks if self.curves else np.arange(self.H.n)

    @property
    def n_violations(self) -> int:
        return int(sum(v.size for v in self.violations.values()))


def inverse_matrix(H: BandedHermitian) -> np.ndarray:
    """``H^{-1}`` from the tracked factorization (``H`` must be positive definite)."""
    if H.provenance is None:
        raise DomainError("inverse target needs a tracked factorization")
    lam, V = H.provenance.eigenvalues, H.provenance.basis
    if lam[0] <= 0:
        raise DomainError("inverse target needs a positive definite matrix")
    A = (V / lam) @ V.conj().T
    return 0.5 * (A + A.conj().T)


def projector_diagnostics(P: np.ndarray) -> dict[str, float]:
    n = P.shape[0]
    return {
        "idempotency_fro": float(np.linalg.norm(P @ P - P)),
        "hermitian_max": float(np.max(np.abs(P - P.conj().T))),
        "trace": float(np.real(np.trace(P))),
        "n": n,
    }


def measured_rate(curve: Sequence[float], m: int, *, floor: float, k_min: int = 10) -> float:
    """Least-squares decay rate of ``log D`` per unit ``k/m`` above the noise floor."""
    d = np.asarray(curve, dtype=float)
    k = np.arange(d.size)
    sel = (k >= k_min * m) & (d > floor)
    if sel.sum() < 2:
        return float("nan")
    slope = np.polyfit(k[sel] / m, np.log(d[sel]), 1)[0]
    return float(-slope)


def run_experiment(cfg: ExperimentConfig, H: BandedHermitian | None = None) -> ExperimentResult:
    """Run ``cfg``; pass ``H`` to reuse an already generated matrix."""
    cfg.check_size()
    lam = cfg.spectrum()
    if H is None:
        log.info("generating n=%d m=%d seed=%d", lam.size, cfg.m, cfg.seed)
        H = generate(lam, cfg.m, SeededRng(cfg.seed), complex_=cfg.complex_)
    n = H.n
    ks = np.arange(min(cfg.k_max if cfg.k_max is not None else n - 1, n - 1) + 1)
    diag = {f"residual_{k}": v for k, v in H.residuals().items()}
    diag["cutoff"] = H.cutoff

    if cfg.target == "inverse":
        A = inverse_matrix(H)
        decay = decay_profile(A, "inverse")
        curves = {f: bound_curve(f, ks, m=cfg.m, eigenvalues=lam, tol=cfg.tol) for f in cfg.families}
        floor = roundoff_floor(n) * float(np.max(np.abs(A)))
        violations = {
            f: bound_violations(decay.curve, c.capped, 1, floor=floor)
            for f, c in curves.items() if f.startswith("inv_")
        }
        return ExperimentResult(cfg, H, decay, curves, violations, diag)

    # Bounds are evaluated on the spectrum scaled to max(b1, b2) = 1.
    spec = spectrum_from_eigenvalues(lam, cfg.mu, scale_to_unit=True)
    ladder = distinct_magnitudes(spec.apply(lam), cfg.tol_cluster, a=spec.a)
    P = spectral_projector(H, cfg.mu)
    decay = decay_profile(P, "projector")
    diag.update(projector_diagnostics(P))
    diag["n_e"] = int(np.sum(lam < cfg.mu))

    curves = {}
    for f in cfg.families:
        log.info("bound family %s on %d distances", f, ks.size)
        curves[f] = bound_curve(f, ks, a=spec.a, b=spec.b, m=cfg.m, ladder=ladder,
                                b1=spec.b1, b2=spec.b2, tol=cfg.tol, k2=cfg.k2)
    floor = roundoff_floor(n)
    violations = {
        f: bound_violations(decay.curve, c.capped, cfg.m, floor=floor)
        for f, c in curves.items() if f in PROJECTOR_FAMILIES
    }
    if "rate_fuchs" in curves:
        diag["fuchs_eta"] = curves["rate_fuchs"].params["eta"]
        diag["measured_rate"] = measured_rate(decay.curve, cfg.m, floor=1e3 * floor)
    sl_by_ell = {ell: sl_fixed_ell_curve(ladder, spec.a, cfg.m, ks, ell) for ell in cfg.sl_ells}
    columns = {col: curves[f].capped for col, f in REPORT_FAMILIES.items() if f in curves}
    report = truncation_report(P, decay, columns, cfg.epsilons, exact_2norm=cfg.exact_2norm)
    return ExperimentResult(cfg, H, decay, curves, violations, diag, spec, ladder, report, sl_by_ell)


def plot_table(decay: DecayProfile, curves: Mapping[str, BoundCurve],
               extra: Mapping[str, Sequence[float]] | None = None) -> str:
    """Combined CSV: ``k``, the decay, then each curve's capped values."""
    n = len(decay)
    cols = {"decay": decay.curve}
    cols.update({f: c.dense(n) for f, c in curves.items()})
    for name, values in (extra or {}).items():
        col = np.full(n, np.nan)
        col[: len(values)] = np.asarray(values)[:n]
        cols[name] = col
    lines = ["k," + ",".join(cols)]
    for k in range(n):
        lines.append(f"{k}," + ",".join("" if np.isnan(v[k]) else f"{v[k]:.17g}" for v in cols.values()))
    return "\n".join(lines) + "\n"


def format_diagnostics(diag: Mapping[str, float], violations: Mapping[str, np.ndarray]) -> str:
    lines = [f"{k} = {v!r}" for k, v in diag.items()]
    for f, ks in violations.items():
        lines.append(f"violations_{f} = {ks.size}")
    return "\n".join(lines) + "\n"


def write_outputs(result: ExperimentResult, out: str | Path, *, plot: bool | None = None) -> list[Path]:
    """Write CSVs (and a figure if requested) into ``out``; returns the paths written."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    files: dict[str, str] = {
        "config.ini": cfg.to_ini(),
        "decay.csv": result.decay.to_csv(),
        "diagnostics.txt": format_diagnostics(result.diagnostics, result.violations),
    }
    if result.spec is not None:
        files["spectrum.txt"] = result.spec.to_text()
    for f, c in result.curves.items():
        files[f"bounds_{f}.csv"] = c.to_csv()
    extra = {f"B_SL_ell{ell}": v for ell, v in result.sl_by_ell.items()}
    files["plotdata.csv"] = plot_table(result.decay, result.curves, extra)
    if result.report is not None:
        files["report.csv"] = result.report.to_csv()
    written = []
    for name, text in files.items():
        path = out / name
        path.write_text(text)
        written.append(path)
    if cfg.plot if plot is None else plot:
        from .plotting import render_decay_figure

        written.append(render_decay_figure(
            result.decay, result.curves, out / "figure.png",
            title=f"{cfg.name}: n={result.H.n}, m={cfg.m}", extra=extra,
        ))
    return written
