import numpy as np
import pytest

from fctdenoise.acquisition import SingleBit, Uniform
from fctdenoise.cli import main
from fctdenoise.config import ConfigError, RunConfig, parse_config, parse_quantizer
from fctdenoise.fileio import read_cbim, read_pgm, read_samples, to_gray8, write_pgm
from fctdenoise.metrics import SweepReport

DESK = """
# acceptance-scale grid
x0 = -1.275
dx = 0.005
n = 512
f_m = 2
truncation_epsilon = 1e-4
"""


def run(tmp_path, text, *args):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(text)
    return main([args[0], "--config", str(cfg), "--out", str(tmp_path / "out"), *args[1:]])


def test_parse_config_defaults_and_keys():
    cfg = parse_config("lambda = 2.5\nquantizer = uniform:4:3.0\nN = 2, 5\nquantizers = full,1bit\n")
    assert cfg.lam == 2.5
    assert cfg.quantizer == Uniform(4, 3.0)
    assert cfg.N == (2, 5)
    assert [q.tag for q in cfg.sweep_quantizers] == ["full", "1bit"]
    d = RunConfig()
    assert (d.n, d.dx, d.f_m, d.sigma2, d.sigma_d2, d.N, d.seeds) == (512, 0.005, 2.0, 0.1, 2.9, (2, 5, 10, 25), 5)
    assert d.quantizer == SingleBit()
    d.validate()


def test_parse_quantizer():
    assert parse_quantizer("uniform8") == Uniform(8)
    assert parse_quantizer("1bit").tag == "1bit"
    for bad in ("uniform", "twobit", "uniform:x"):
        with pytest.raises(ValueError):
            parse_quantizer(bad)


def test_config_errors_are_consolidated(tmp_path):
    with pytest.raises(ConfigError) as info:
        parse_config("bogus = 1\nn = ten\nno equals sign\n")
    assert len(info.value.problems) == 3
    cfg = parse_config("N = 2, 32\nsigma_d2 = 0\nedge = wrap\nlambda = 9\n")
    with pytest.raises(ConfigError) as info:
        cfg.validate()
    text = str(info.value)
    for needle in ("N=32", "sigma_d2", "edge", "kernel"):
        assert needle in text


def test_generate_preview_and_determinism(tmp_path, capsys):
    # grid with 2 L f_m even and cell-centred points: the cosine is exact
    text = "x0 = -1.2475\ndx = 0.005\nn = 500\nf_m = 2\n"
    assert run(tmp_path, text, "generate") == 0
    out = tmp_path / "out"
    pix = read_cbim(out / "truth.cbim")
    pgm = read_pgm(out / "truth.pgm")
    assert pgm.shape == (500, 500)
    assert np.array_equal(pgm, to_gray8(pix))
    # nearest points to the origin sit half a step away
    assert pgm[249, 249] == 255
    first = [(out / f).read_bytes() for f in ("truth.cbim", "truth.pgm")]
    assert run(tmp_path, text, "generate") == 0
    assert [(out / f).read_bytes() for f in ("truth.cbim", "truth.pgm")] == first


def test_generate_reference_grid_mapping(tmp_path):
    text = "x0 = -2.5575\ndx = 0.0025\nn = 2048\nf_m = 4\n"
    assert run(tmp_path, text, "generate") == 0
    pix = read_cbim(tmp_path / "out" / "truth.cbim")
    pgm = read_pgm(tmp_path / "out" / "truth.pgm")
    v = pix[1023, 1023]
    assert pgm[1023, 1023] == min(255, int(np.floor((v + 1) / 2 * 255 + 0.5)))
    assert np.max(np.abs(pix)) <= 1.0


def test_generate_from_pgm(tmp_path, capsys):
    raw = np.random.default_rng(0).integers(0, 256, (512, 512), dtype=np.uint8)
    write_pgm(tmp_path / "img.pgm", raw)
    assert run(tmp_path, DESK + "image = img.pgm\n", "generate") == 0
    assert "out_of_band_distortion" in capsys.readouterr().out
    write_pgm(tmp_path / "small.pgm", raw[:100, :100])
    assert run(tmp_path, DESK + "image = small.pgm\n", "generate") == 2
    assert "100x100" in capsys.readouterr().err


def test_acquire(tmp_path, capsys):
    assert run(tmp_path, DESK + "N = 2, 10\nquantizer = 1bit\n", "acquire", "--seed", "7") == 0
    s = read_samples(tmp_path / "out" / "samples_1bit_N10.cbss")
    assert (s.stride, s.m_s, s.seed) == (5, 103, 7)
    before = (tmp_path / "out" / "samples_1bit_N2.cbss").read_bytes()
    assert run(tmp_path, DESK + "N = 2, 10\nquantizer = 1bit\n", "acquire", "--seed", "7") == 0
    assert (tmp_path / "out" / "samples_1bit_N2.cbss").read_bytes() == before


def test_acquire_inadmissible(tmp_path, capsys):
    assert run(tmp_path, DESK + "N = 4\n", "acquire") == 2
    err = capsys.readouterr().err
    assert "N=4" in err and "nearest admissible N" in err and "5" in err


def test_reconstruct_noiseless(tmp_path, capsys):
    text = DESK + "N = 2\nquantizer = full\nsigma2 = 0\nsigma_d2 = 0\n"
    assert run(tmp_path, text, "acquire") == 0
    assert run(tmp_path, text, "reconstruct") == 0
    out = tmp_path / "out"
    rep = SweepReport.from_csv((out / "result_full_N2.csv").read_text())
    assert rep.rows[0].mse_mean <= 1e-6
    assert read_pgm(out / "estimate_full_N2.pgm").shape == (512, 512)
    assert read_cbim(out / "estimate_full_N2.cbim").shape == (512, 512)


def test_reconstruct_rejects_variance_mismatch(tmp_path, capsys):
    assert run(tmp_path, DESK + "N = 5\nquantizer = 1bit\n", "acquire") == 0
    capsys.readouterr()
    assert run(tmp_path, DESK + "N = 5\nquantizer = 1bit\nsigma_d2 = 1.9\n", "reconstruct") == 2
    assert "do not match" in capsys.readouterr().err


def test_sweep_and_report(tmp_path, capsys):
    text = DESK + "N = 5, 10\nquantizers = 1bit, full\nseeds = 2\n"
    assert run(tmp_path, text, "sweep", "--threads", "2") == 0
    printed = capsys.readouterr().out
    csv_text = (tmp_path / "out" / "sweep.csv").read_text()
    assert printed == csv_text
    rep = SweepReport.from_csv(csv_text)
    assert len(rep.rows) == 4
    assert "# slope,1bit," in csv_text and "# gap_std," in csv_text
    assert run(tmp_path, text, "report") == 0
    assert "gap std" in capsys.readouterr().out


def test_sweep_empty_N(tmp_path, capsys):
    assert run(tmp_path, DESK + "N =\n", "sweep") == 2
    assert "N list is empty" in capsys.readouterr().err


def test_runtime_error_exit(tmp_path, capsys):
    assert run(tmp_path, DESK, "report", "--csv", str(tmp_path / "missing.csv")) == 3


def test_bad_threads_and_missing_config(tmp_path):
    assert run(tmp_path, DESK, "sweep", "--threads", "0") == 2
    assert main(["generate", "--config", str(tmp_path / "nope.cfg")]) == 2
