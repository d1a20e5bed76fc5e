import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fctdenoise.acquisition import AcquisitionConfig, FullPrecision, SingleBit, Uniform, acquire
from fctdenoise.fileio import (
    FormatError,
    read_cbim,
    read_pgm,
    read_samples,
    samples_from_bytes,
    samples_to_bytes,
    to_gray8,
    write_cbim,
    write_pgm,
    write_samples,
)
from fctdenoise.imagemodel import make_cosine_image
from fctdenoise.kernel import KernelParams


@pytest.mark.parametrize("ascii_", [False, True])
def test_pgm_round_trip(tmp_path, ascii_):
    px = np.random.default_rng(0).integers(0, 256, (7, 11), dtype=np.uint8)
    write_pgm(tmp_path / "a.pgm", px, ascii=ascii_)
    assert np.array_equal(read_pgm(tmp_path / "a.pgm"), px)


def test_pgm_header_comments(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P2\n# made by hand\n3 2\n255\n0 1 2\n# mid\n253 254 255\n")
    assert read_pgm(p).tolist() == [[0, 1, 2], [253, 254, 255]]


def test_pgm_rejects(tmp_path):
    p = tmp_path / "bad.pgm"
    p.write_bytes(b"P6\n1 1\n255\n\x00\x00\x00")
    with pytest.raises(FormatError):
        read_pgm(p)
    p.write_bytes(b"P5\n2 2\n65535\n" + bytes(8))
    with pytest.raises(FormatError):
        read_pgm(p)
    p.write_bytes(b"P5\n4 4\n255\n" + bytes(3))
    with pytest.raises(FormatError):
        read_pgm(p)
    with pytest.raises(ValueError):
        write_pgm(p, np.zeros((2, 2)))


def test_to_gray8_examples():
    v = np.array([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0])
    # v = 0 maps to exactly 127.5, which rounds up
    assert to_gray8(v).tolist() == [0, 0, 64, 128, 191, 255, 255]


@settings(max_examples=200, deadline=None)
@given(st.floats(-1.5, 1.5))
def test_to_gray8_matches_decimal_rounding(v):
    from decimal import ROUND_HALF_UP, Decimal

    x = (v + 1.0) / 2.0 * 255.0
    ref = int(Decimal(x).quantize(Decimal(1), rounding=ROUND_HALF_UP))
    assert int(to_gray8(v)) == min(255, max(0, ref))


@pytest.mark.parametrize("quant", [FullPrecision(), SingleBit(), Uniform(5)])
@pytest.mark.parametrize("edge", ["symmetric", "available"])
def test_cbss_round_trip(tmp_path, desk_grid, quant, edge):
    img = make_cosine_image(2.0, desk_grid)
    s = acquire(img, AcquisitionConfig(5, 0.1, 2.9, quant, seed=2**63 + 5, edge=edge), KernelParams(2.0, 1e-4))
    write_samples(tmp_path / "s.cbss", s)
    t = read_samples(tmp_path / "s.cbss")
    assert np.array_equal(t.values, s.values)
    assert (t.stride, t.origin, t.m_s, t.N, t.seed, t.sigma2, t.sigma_d2) == (
        s.stride, s.origin, s.m_s, s.N, s.seed, s.sigma2, s.sigma_d2
    )
    assert t.quantizer == s.quantizer
    assert samples_to_bytes(t) == samples_to_bytes(s)


def test_cbss_single_bit_is_packed(desk_grid):
    img = make_cosine_image(2.0, desk_grid)
    s = acquire(img, AcquisitionConfig(2, 0.1, 2.9, SingleBit(), edge="available"), KernelParams())
    data = samples_to_bytes(s)
    rowbytes = (s.m_s + 7) // 8
    assert len(data) - 56 == rowbytes * s.m_s


def test_cbss_rejects(desk_grid):
    with pytest.raises(FormatError):
        samples_from_bytes(b"CB")
    with pytest.raises(FormatError):
        samples_from_bytes(b"XXXX" + bytes(60))
    img = make_cosine_image(2.0, desk_grid)
    good = samples_to_bytes(acquire(img, AcquisitionConfig(2, 0.0, edge="available")))
    with pytest.raises(FormatError):
        samples_from_bytes(good[:-1])
    with pytest.raises(FormatError):
        samples_from_bytes(good[:4] + b"\x09\x00" + good[6:])


def test_cbim_round_trip(tmp_path):
    a = np.random.default_rng(3).standard_normal((6, 6))
    write_cbim(tmp_path / "a.cbim", a)
    assert np.array_equal(read_cbim(tmp_path / "a.cbim"), a)
    (tmp_path / "b.cbim").write_bytes(b"NOPE" + bytes(12))
    with pytest.raises(FormatError):
        read_cbim(tmp_path / "b.cbim")
    with pytest.raises(ValueError):
        write_cbim(tmp_path / "c.cbim", np.zeros((2, 3)))
