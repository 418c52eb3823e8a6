"""Plain-text matrix files.

A matrix file starts with ``gapline-matrix v1 n=<n> m=<m>`` followed by ``n``
rows of ``n`` space-separated values with 17 significant digits (complex
entries are written as ``re+imj``).  ``stem.eigs`` lists the eigenvalues one
per line and ``stem.basis`` stores the eigenvector matrix in the same layout
as the matrix itself.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import DimensionError, ValidationError
from .factory import BandedHermitian, Provenance

HEADER = "gapline-matrix v1 n={n} m={m}"
_HEADER_RE = re.compile(r"^gapline-matrix v1 n=(\d+) m=(\d+)$")


def _fmt(x) -> str:
    if np.iscomplexobj(x):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    return f"{x:.17g}"


def format_matrix(M: np.ndarray, m: int) -> str:
    M = np.asarray(M)
    n = M.shape[0]
    lines = [HEADER.format(n=n, m=m)]
    lines.extend(" ".join(_fmt(x) for x in row) for row in M)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[np.ndarray, int]:
    """Inverse of :func:`format_matrix`; returns ``(matrix, m)``."""
    lines = text.strip("\n").splitlines()
    if not lines:
        raise ValidationError("empty matrix file")
    hit = _HEADER_RE.match(lines[0].strip())
    if hit is None:
        raise ValidationError(f"bad matrix header: {lines[0]!r}")
    n, m = int(hit.group(1)), int(hit.group(2))
    rows = [line.split() for line in lines[1:] if line.strip()]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionError(f"header says n={n} but body is not {n}x{n}")
    is_complex = any("j" in tok for r in rows for tok in r)
    conv = complex if is_complex else float
    M = np.array([[conv(tok) for tok in r] for r in rows])
    return M, m


def companion_paths(path: str | Path) -> tuple[Path, Path, Path]:
    """``(matrix, eigs, basis)`` paths sharing the stem of ``path``."""
    p = Path(path)
    stem = p.with_suffix("") if p.suffix == ".mat" else p
    return stem.with_suffix(".mat"), stem.with_suffix(".eigs"), stem.with_suffix(".basis")


def write_matrix(path: str | Path, H: BandedHermitian) -> list[Path]:
    """Write ``H`` (and its factorization, if tracked); returns the files written."""
    mat, eigs, basis = companion_paths(path)
    mat.parent.mkdir(parents=True, exist_ok=True)
    mat.write_text(format_matrix(H.data, H.m))
    written = [mat]
    if H.provenance is not None:
        eigs.write_text("".join(f"{v:.17g}\n" for v in H.provenance.eigenvalues))
        basis.write_text(format_matrix(H.provenance.basis, H.m))
        written += [eigs, basis]
    return written


def read_eigs(path: str | Path) -> np.ndarray:
    text = Path(path).read_text()
    return np.array([float(tok) for tok in text.split()])


def read_matrix(path: str | Path) -> BandedHermitian:
    """Load a matrix file; companions found next to it become its provenance."""
    mat, eigs, basis = companion_paths(path)
    M, m = parse_matrix(mat.read_text())
    if np.any(M != M.conj().T):
        raise ValidationError(f"{mat} is not exactly Hermitian")
    idx = np.arange(M.shape[0])
    if np.any(M[np.abs(np.subtract.outer(idx, idx)) > m]):
        raise ValidationError(f"{mat} has nonzero entries outside bandwidth {m}")
    prov = None
    if eigs.exists() and basis.exists():
        lam = read_eigs(eigs)
        V, _ = parse_matrix(basis.read_text())
        if lam.size != M.shape[0] or V.shape != M.shape:
            raise DimensionError("companion files do not match the matrix")
        prov = Provenance(basis=V, eigenvalues=lam)
    return BandedHermitian(data=M, m=m, provenance=prov)
