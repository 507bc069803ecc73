"""Field types, boundary reads and image round-trips."""

import numpy as np
import pytest
from PIL import Image

import oracles
from pdebin import (BinaryMap, DimensionError, FormatError, ScalarField,
                    load_image, sample_at, save_image)


def test_scalar_field_validates_range_and_shape():
    with pytest.raises(ValueError):
        ScalarField(np.array([[0.5, 1.5]]))
    with pytest.raises(ValueError):
        ScalarField(np.array([[np.nan]]))
    with pytest.raises(DimensionError):
        ScalarField(np.zeros((0, 3)))
    with pytest.raises(DimensionError):
        ScalarField(np.zeros(4))
    f = ScalarField(np.array([[0.0, 1.0]]))
    assert f.width == 2 and f.height == 1


def test_binary_map_validates_bits():
    with pytest.raises(ValueError):
        BinaryMap(np.array([[0, 2]]))
    m = BinaryMap(np.array([[0, 1], [1, 0]]))
    assert m.bits.dtype == np.uint8
    assert m.to_field().data.tolist() == [[0.0, 1.0], [1.0, 0.0]]


def test_sample_at_replicates_and_matches_clamped_reads():
    f = ScalarField(np.array([[0.1, 0.2], [0.3, 0.4]]))
    assert sample_at(f, -1, -1) == 0.1
    assert sample_at(f, 2, 0) == 0.2
    assert sample_at(f, 1, 1) == 0.4
    rng = np.random.RandomState(7)
    field = ScalarField(rng.rand(5, 9))
    for _ in range(200):
        x = int(rng.randint(-10, 19))
        y = int(rng.randint(-10, 15))
        assert sample_at(field, x, y) == oracles.read(field.data, y, x)


def test_load_png_white_and_red_pixels(tmp_path):
    white = tmp_path / "white.png"
    Image.new("RGB", (1, 1), (255, 255, 255)).save(white)
    assert load_image(white).data[0, 0] == pytest.approx(1.0, abs=1e-12)

    red = tmp_path / "red.png"
    Image.new("RGB", (1, 1), (255, 0, 0)).save(red)
    assert load_image(red).data[0, 0] == pytest.approx(0.2126, abs=1e-12)


def test_load_pgm_scales_by_255(tmp_path):
    path = tmp_path / "tiny.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 128, 255, 64]))
    field = load_image(path)
    expected = np.array([[0, 128], [255, 64]]) / 255.0
    assert np.array_equal(field.data, expected)


def test_load_pgm_header_comments_and_16bit(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P5\n# a comment\n1 2\n# another\n1000\n"
                     + (0).to_bytes(2, "big") + (1000).to_bytes(2, "big"))
    field = load_image(path)
    assert field.data.tolist() == [[0.0], [1.0]]


def test_load_pgm_rejects_bad_headers(tmp_path):
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"P6\n1 1\n255\n\x00")
    with pytest.raises(FormatError):
        load_image(bad)
    zero = tmp_path / "zero.pgm"
    zero.write_bytes(b"P5\n0 3\n255\n")
    with pytest.raises(DimensionError):
        load_image(zero)
    short = tmp_path / "short.pgm"
    short.write_bytes(b"P5\n2 2\n255\n\x00\x01")
    with pytest.raises(FormatError):
        load_image(short)


def test_load_16bit_png(tmp_path):
    path = tmp_path / "deep.png"
    arr = np.array([[0, 65535], [32768, 1234]], dtype=np.uint16)
    Image.fromarray(arr).save(path)
    field = load_image(path)
    assert np.allclose(field.data, arr / 65535.0, atol=1e-12)


def test_unsupported_extension_and_missing_file(tmp_path):
    with pytest.raises(FormatError):
        load_image(tmp_path / "x.tif")
    with pytest.raises(OSError):
        load_image(tmp_path / "missing.png")


def test_save_rounds_half_up(tmp_path):
    path = tmp_path / "half.png"
    save_image(ScalarField(np.array([[0.5]])), path)
    assert np.asarray(Image.open(path))[0, 0] == 128


def test_binary_map_save_bytes_and_roundtrip(tmp_path):
    m = BinaryMap(np.array([[0, 1]]))
    png = tmp_path / "m.png"
    pgm = tmp_path / "m.pgm"
    save_image(m, png)
    save_image(m, pgm)
    assert np.asarray(Image.open(png)).tolist() == [[0, 255]]
    assert pgm.read_bytes().endswith(bytes([0, 255]))
    for path in (png, pgm):
        reloaded = load_image(path)
        assert np.array_equal(reloaded.data, m.bits.astype(float))


@pytest.mark.parametrize("suffix", [".png", ".pgm"])
def test_save_load_roundtrip_within_quantization(tmp_path, suffix):
    rng = np.random.RandomState(11)
    field = ScalarField(rng.rand(17, 23))
    path = tmp_path / f"rt{suffix}"
    save_image(field, path)
    back = load_image(path)
    assert np.max(np.abs(back.data - field.data)) <= 1.0 / 255.0 + 1e-12
    # a second save/load is exact: quantization is idempotent
    save_image(back, path)
    again = load_image(path)
    assert np.array_equal(again.data, back.data)
