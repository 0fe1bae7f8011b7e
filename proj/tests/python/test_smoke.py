from pathlib import Path

import numpy as np
import pytest

import ahc

IMAGES = Path(__file__).resolve().parents[1] / "data" / "images"


def test_set1_is_orthonormal():
    report = ahc.validate(ahc.builtin_tables("set1"))
    assert report["orthonormal"]
    assert report["norms"] == pytest.approx([1.0, 1.0, 1.0])
    assert ahc.is_unitary(ahc.builtin_tables("set1"))


def test_printed_set3_is_singular():
    assert not ahc.is_invertible(ahc.printed_tables("set3"))
    assert ahc.is_invertible(ahc.builtin_tables("set3"))


def test_block_forward_and_inverse():
    block = np.array([[100.0, 50.0], [30.0, 20.0]])
    coeffs = ahc.block_forward(block, "set1")
    assert coeffs == pytest.approx((50.0, 60.0, 100.0, 40.0))
    np.testing.assert_allclose(ahc.block_inverse(coeffs, "set1"), block)


def test_adaptive_block_prefers_lower_energy():
    *_, name = ahc.adaptive_block_forward(np.array([[8.0, 0.0], [0.0, 0.0]]))
    assert name == "set2"
    *_, name = ahc.adaptive_block_forward(np.full((2, 2), 5.0))
    assert name == "set1"


def test_subband_forward_shapes():
    rng = np.random.default_rng(3)
    out = ahc.subband_forward(rng.uniform(0, 255, (6, 8)), "adaptive-block")
    for key in ("A", "V", "H", "D", "ids"):
        assert out[key].shape == (3, 4)


@pytest.mark.parametrize("name", ["camera.pgm", "astronaut.ppm"])
def test_encode_decode_roundtrip(name):
    img = ahc.load_pnm(str(IMAGES / name))
    data = ahc.encode(img, levels=2, quant=64, basis="adaptive-block")
    assert data[:4] == b"AHC1"
    out = ahc.decode(data)
    assert out.shape == img.shape and out.dtype == np.uint8
    m = ahc.metrics(img, out, len(data))
    assert m["psnr"] >= 30.0
    assert 0.0 < m["compression_rate"] < 100.0
    assert ahc.encode(img, levels=2, quant=64, basis="adaptive-block") == data


def test_inspect_reports_header():
    img = ahc.load_pnm(str(IMAGES / "coins.pgm"))
    text = ahc.inspect(ahc.encode(img, levels=1, quant=16, basis="set2"))
    assert "format=AHC1 version=1" in text
    assert "channels=1" in text


def test_transform_roundtrip_is_exact():
    rng = np.random.default_rng(7)
    img = rng.integers(0, 256, (13, 17, 3), dtype=np.uint8)
    for basis in ahc.BASIS_CHOICES:
        np.testing.assert_array_equal(ahc.transform_roundtrip(img, levels=3, basis=basis), img)


def test_errors_carry_codes():
    with pytest.raises(ahc.AhcError) as exc:
        ahc.decode(b"not a stream")
    assert exc.value.code == "bad-magic"
    img = ahc.load_pnm(str(IMAGES / "moon.pgm"))
    data = ahc.encode(img, levels=1, quant=8, basis="set1")
    with pytest.raises(ahc.AhcError) as exc:
        ahc.decode(data[:-1])
    assert exc.value.code == "truncated"
    with pytest.raises(ValueError):
        ahc.encode(img, quant=1)


def test_pnm_roundtrip(tmp_path):
    img = np.arange(24, dtype=np.uint8).reshape(2, 4, 3)
    path = tmp_path / "x.ppm"
    ahc.save_pnm(str(path), img)
    np.testing.assert_array_equal(ahc.load_pnm(str(path)), img)
