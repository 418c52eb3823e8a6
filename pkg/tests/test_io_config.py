import configparser

import numpy as np
import pytest

from gapline.config import (
    MAX_DESK_N,
    PRESETS,
    ExperimentConfig,
    clustered_magnitudes,
    parse_intervals,
    uniform_on_intervals,
)
from gapline.errors import DimensionError, ParameterError, ValidationError
from gapline.factory import generate
from gapline.io import companion_paths, format_matrix, parse_matrix, read_matrix, write_matrix


# ---- matrix files ---------------------------------------------------------


@pytest.mark.parametrize("complex_", [False, True])
def test_matrix_file_roundtrip(tmp_path, complex_):
    lam = np.linspace(-1, 1, 12)
    lam[6:] += 0.2
    H = generate(lam, 3, 5, complex_=complex_)
    written = write_matrix(tmp_path / "h.mat", H)
    assert [p.suffix for p in written] == [".mat", ".eigs", ".basis"]
    back = read_matrix(tmp_path / "h.mat")
    assert back.m == 3
    assert np.array_equal(back.data, H.data)
    assert np.array_equal(back.provenance.eigenvalues, H.provenance.eigenvalues)
    assert np.array_equal(back.provenance.basis, H.provenance.basis)


def test_matrix_without_companions(tmp_path):
    (tmp_path / "d.mat").write_text(format_matrix(np.diag([-1.0, 2.0]), 0))
    H = read_matrix(tmp_path / "d.mat")
    assert H.provenance is None and H.m == 0


def test_header_and_shape_errors():
    with pytest.raises(ValidationError):
        parse_matrix("")
    with pytest.raises(ValidationError):
        parse_matrix("matrix 2 2\n1 0\n0 1\n")
    with pytest.raises(DimensionError):
        parse_matrix("gapline-matrix v1 n=2 m=1\n1 0\n")
    with pytest.raises(DimensionError):
        parse_matrix("gapline-matrix v1 n=2 m=1\n1 0 0\n0 1 0\n")


def test_read_rejects_non_hermitian_or_wide(tmp_path):
    (tmp_path / "a.mat").write_text("gapline-matrix v1 n=2 m=1\n1 2\n3 1\n")
    with pytest.raises(ValidationError):
        read_matrix(tmp_path / "a.mat")
    (tmp_path / "b.mat").write_text("gapline-matrix v1 n=3 m=1\n1 0 1\n0 1 0\n1 0 1\n")
    with pytest.raises(ValidationError):
        read_matrix(tmp_path / "b.mat")


def test_companion_paths():
    assert [p.name for p in companion_paths("x/run.mat")] == ["run.mat", "run.eigs", "run.basis"]
    assert [p.name for p in companion_paths("run")] == ["run.mat", "run.eigs", "run.basis"]


# ---- configuration --------------------------------------------------------


def test_exactly_one_recipe():
    with pytest.raises(ValidationError):
        ExperimentConfig()
    with pytest.raises(ValidationError):
        ExperimentConfig(preset="fig1", eigenvalues=(1.0,))
    with pytest.raises(ValidationError):
        ExperimentConfig(preset="nope")


def test_config_validation():
    with pytest.raises(ParameterError):
        ExperimentConfig(eigenvalues=(1.0, 2.0), m=0)
    with pytest.raises(ParameterError):
        ExperimentConfig(eigenvalues=(1.0, 2.0), families=("B7",))
    with pytest.raises(ParameterError):
        ExperimentConfig(eigenvalues=(1.0, 2.0), k2="other")
    with pytest.raises(ParameterError):
        ExperimentConfig(eigenvalues=(1.0, 2.0), epsilons=(0.0,))
    with pytest.raises(ValidationError):
        ExperimentConfig(eigenvalues=(1.0, 2.0), n=3).spectrum()


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_ini_roundtrip(tmp_path, name):
    cfg = ExperimentConfig.from_preset(name, seed=7, n=PRESETS[name].n // 10 * 2 or None)
    path = tmp_path / "c.ini"
    path.write_text(cfg.to_ini())
    assert ExperimentConfig.from_file(path) == cfg


def test_ini_roundtrip_explicit_spectrum(tmp_path):
    cfg = ExperimentConfig(name="x", intervals=((-1.0, -0.25, 7), (0.25, 1.0, 9)), m=3,
                           epsilons=(0.1, 1e-3), sl_ells=(0, 2), exact_2norm=True, plot=False)
    path = tmp_path / "c.ini"
    path.write_text(cfg.to_ini())
    back = ExperimentConfig.from_file(path)
    assert back == cfg
    assert back.spectrum().size == 16
    cfg = ExperimentConfig(eigenvalues=(-0.5, 0.1, 1 / 3), target="projector")
    path.write_text(cfg.to_ini())
    assert ExperimentConfig.from_file(path).eigenvalues == cfg.eigenvalues


def test_ini_unknown_keys(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("[experiment]\npreset = fig1\ncolour = red\n")
    with pytest.raises(ValidationError):
        ExperimentConfig.from_file(path)
    path.write_text("[misc]\nx = 1\n")
    with pytest.raises(ValidationError):
        ExperimentConfig.from_file(path)


def test_ini_minimal(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("[experiment]\npreset = fig3  ; tridiagonal\nseed = 4\n")
    cfg = ExperimentConfig.from_file(path)
    assert (cfg.preset, cfg.seed, cfg.m, cfg.name) == ("fig3", 4, 1, "fig3")


def test_intervals():
    assert parse_intervals("-1:-0.3:3, 0.3:1:2") == ((-1.0, -0.3, 3), (0.3, 1.0, 2))
    with pytest.raises(ValidationError):
        parse_intervals("0:1")
    with pytest.raises(ValidationError):
        parse_intervals("1:0:3")
    assert uniform_on_intervals([(0, 1, 3)]).tolist() == [0.0, 0.5, 1.0]


def test_preset_fig1():
    lam = ExperimentConfig.from_preset("fig1").spectrum()
    assert lam.size == 2000
    assert np.sum(lam < 0) == 1000
    assert lam.min() == -1.0 and lam.max() == 1.0
    assert np.abs(lam).min() == 0.3
    assert ExperimentConfig.from_preset("table1").spectrum().tolist() == lam.tolist()


def test_preset_fig2():
    lam = ExperimentConfig.from_preset("fig2").spectrum()
    assert lam.size == 2000 and np.sum(lam == -1.0) == 10
    rest = np.abs(lam[lam > -1])
    assert rest.min() == pytest.approx(0.1) and rest.max() == pytest.approx(0.5)


def test_preset_fig3_and_literal_variant():
    lam = ExperimentConfig.from_preset("fig3").spectrum()
    assert lam.size == 300 and np.array_equal(lam, -lam[::-1])
    mags = np.sort(np.abs(lam))
    assert mags[0] == pytest.approx(0.1) and mags[-1] == pytest.approx(1.0)
    # clustered near the gap: first steps far smaller than the last ones
    d = np.diff(np.unique(mags))
    assert d[0] < 0.05 * d[-1]
    lit = clustered_magnitudes(150, literal=True)
    assert lit.max() == pytest.approx(1 + 0.9 * (150 / 299 - 2 * np.sqrt(150 / 299)))
    assert lit.max() < 0.2
    with pytest.raises(ValidationError):
        ExperimentConfig.from_preset("fig3", n=301).spectrum()


def test_preset_fig4_and_outlier():
    lam = ExperimentConfig.from_preset("fig4").spectrum()
    assert lam.size == 300 and np.sum(lam < 0) == 150
    spd = ExperimentConfig.from_preset("spd_outlier")
    lam = spd.spectrum()
    assert spd.target == "inverse" and spd.m == 2
    assert lam.size == 200 and lam[-1] == 100.0 and lam[-2] == 2.0 and lam[0] == 1.0


def test_preset_clustered_asymmetric_alternates():
    lam = PRESETS["clustered_asymmetric"].eigenvalues()
    assert lam.size == 300
    assert np.sum(lam < 0) == 150


def test_size_guard():
    big = ExperimentConfig.from_preset("fig1", n=MAX_DESK_N + 2)
    with pytest.raises(ValidationError):
        big.check_size()
    ExperimentConfig.from_preset("fig1", n=MAX_DESK_N + 2, allow_large=True).check_size()
    ExperimentConfig.from_preset("fig1").check_size()


def test_from_parser_reads_booleans():
    p = configparser.ConfigParser()
    p.read_string("[experiment]\npreset = fig1\ncomplex = yes\n[report]\nplot = off\n")
    cfg = ExperimentConfig.from_parser(p)
    assert cfg.complex_ and not cfg.plot
