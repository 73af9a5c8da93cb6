"""PGM codec unit tests."""

import numpy as np
import pytest

from src.cli.pgm import decode_pgm, encode_pgm, read_pgm, write_pgm
from src.core.errors import ImageFormatError


def test_reads_ascii_fixture(fixtures_dir):
    image = read_pgm(fixtures_dir / "white_3x2.pgm")

    assert image.shape == (2, 3)
    np.testing.assert_array_equal(image, 1.0)


def test_reads_sixteen_bit_fixture(fixtures_dir):
    image = read_pgm(fixtures_dir / "wide_2x1.pgm")

    np.testing.assert_array_equal(image, [[1.0, 0.0]])


def test_header_comments():
    data = b"P2\n# made by hand\n2 1\n# levels\n4\n0 4\n"

    np.testing.assert_array_equal(decode_pgm(data), [[0.0, 1.0]])


def test_binary_raster_may_start_with_whitespace_bytes():
    data = b"P5\n2 1\n255\n" + bytes([32, 255])

    np.testing.assert_allclose(decode_pgm(data), [[32 / 255, 1.0]])


def test_quantised_images_survive_encoding():
    image = np.arange(6.0).reshape(2, 3) / 5

    for fmt in ("P2", "P5"):
        np.testing.assert_allclose(decode_pgm(encode_pgm(image, fmt, maxval=5)), image)


def test_rounding_is_half_to_even():
    assert encode_pgm(np.array([[0.25, 0.75]]), "P2", maxval=2) == b"P2\n2 1\n2\n0 2\n"


def test_out_of_range_values_are_clipped():
    data = encode_pgm(np.array([[-0.5, 1.5]]))

    assert data == b"P5\n2 1\n255\n\x00\xff"


def test_sixteen_bit_is_big_endian():
    data = encode_pgm(np.array([[1.0, 0.0]]), maxval=65535)

    assert data.endswith(b"\xff\xff\x00\x00")


@pytest.mark.parametrize(
    "data",
    [
        b"P6\n1 1\n255\n\x00",
        b"P5\n2 2\n255\n\x00\x00",
        b"P2\n2 2\n255\n0 0 0\n",
        b"P2\n1 1\n70000\n0\n",
        b"P2\n1 1\n3\n4\n",
        b"P2\n1 1\n3\nx\n",
        b"P5 1 1 255",
        b"P2\n0 1\n255\n",
        b"P2\n1\n",
    ],
    ids=["magic", "truncated-binary", "truncated-ascii", "maxval", "sample", "word", "no-raster", "width", "header"],
)
def test_malformed_files(data):
    with pytest.raises(ImageFormatError):
        decode_pgm(data)


def test_encode_rejects_bad_images():
    with pytest.raises(ImageFormatError):
        encode_pgm(np.array([[np.nan]]))
    with pytest.raises(ImageFormatError):
        encode_pgm(np.zeros((2, 2, 2)))
    with pytest.raises(ImageFormatError):
        encode_pgm(np.zeros((2, 2)), maxval=0)


def test_file_errors(tmp_path):
    with pytest.raises(ImageFormatError):
        read_pgm(tmp_path / "missing.pgm")
    with pytest.raises(ImageFormatError):
        write_pgm(tmp_path / "no" / "such" / "dir.pgm", np.zeros((2, 2)))


def test_write_then_read(tmp_path):
    path = tmp_path / "out.pgm"
    image = np.array([[0.0, 1.0], [1.0, 0.0]])

    write_pgm(path, image)

    np.testing.assert_array_equal(read_pgm(path), image)
