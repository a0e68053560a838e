import numpy as np
import pytest

from statjpeg import jfif
from statjpeg.errors import CorruptStreamError, UnsupportedFeatureError
from statjpeg.image import RasterImage
from statjpeg.jpeg import decode_image, encode_image
from statjpeg.quant import QuantTable


@pytest.fixture
def gray_file(rng):
    img = RasterImage.from_array(rng.integers(0, 256, size=(16, 16)).astype(np.uint8))
    return encode_image(img, QuantTable(np.full(64, 8)))


@pytest.fixture
def color_file(rng):
    img = RasterImage.from_array(
        rng.integers(0, 256, size=(16, 16, 3)).astype(np.uint8)
    )
    return encode_image(img, QuantTable(np.full(64, 8)), QuantTable(np.full(64, 12)))


def segment_span(data, name, occurrence=0):
    """(start, end) byte span of the given marker segment."""
    found = [off for n, off in jfif.list_markers(data) if n == name]
    off = found[occurrence]
    if name in ("SOI", "EOI"):
        return off, off + 2
    length = int.from_bytes(data[off + 2:off + 4], "big")
    return off, off + 2 + length


def test_emitted_structure_is_valid(gray_file, color_file):
    assert jfif.validate_structure(gray_file) == []
    assert jfif.validate_structure(color_file) == []


def test_marker_walk_names(gray_file):
    names = [n for n, _ in jfif.list_markers(gray_file)]
    assert names[0] == "SOI"
    assert names[-1] == "EOI"
    assert "SOF0" in names and "SOS" in names and "scan" in names


def test_dqt_count_reflects_table_modes(gray_file, color_file):
    assert sum(1 for n, _ in jfif.list_markers(gray_file) if n == "DQT") == 1
    assert sum(1 for n, _ in jfif.list_markers(color_file) if n == "DQT") == 2
    parsed = jfif.parse_jpeg(color_file)
    assert set(parsed.qtables) == {0, 1}
    assert parsed.qtables[0][0] == 8
    assert parsed.qtables[1][0] == 12


def test_progressive_frame_rejected(gray_file):
    start, _ = segment_span(gray_file, "SOF0")
    patched = bytearray(gray_file)
    patched[start + 1] = 0xC2
    with pytest.raises(UnsupportedFeatureError, match="SOF2"):
        jfif.parse_jpeg(bytes(patched))


def test_subsampled_component_rejected(gray_file):
    start, _ = segment_span(gray_file, "SOF0")
    patched = bytearray(gray_file)
    patched[start + 11] = 0x22  # sampling factor byte of component 0
    with pytest.raises(UnsupportedFeatureError, match="subsampled"):
        decode_image(bytes(patched))


def test_restart_interval_rejected(gray_file):
    start, _ = segment_span(gray_file, "SOS")
    dri = bytes([0xFF, 0xDD, 0x00, 0x04, 0x00, 0x08])
    patched = gray_file[:start] + dri + gray_file[start:]
    with pytest.raises(UnsupportedFeatureError, match="DRI"):
        jfif.parse_jpeg(patched)


def test_duplicate_sof0_rejected(gray_file):
    start, end = segment_span(gray_file, "SOF0")
    patched = gray_file[:end] + gray_file[start:end] + gray_file[end:]
    with pytest.raises(UnsupportedFeatureError, match="duplicate SOF0"):
        jfif.parse_jpeg(patched)


def test_missing_sof0_rejected(gray_file):
    start, end = segment_span(gray_file, "SOF0")
    patched = gray_file[:start] + gray_file[end:]
    with pytest.raises(UnsupportedFeatureError, match="missing SOF0"):
        jfif.parse_jpeg(patched)


def test_truncated_file_is_corrupt(gray_file):
    with pytest.raises(CorruptStreamError):
        jfif.parse_jpeg(gray_file[:-2])  # EOI removed
    with pytest.raises(CorruptStreamError):
        jfif.parse_jpeg(gray_file[:20])


def test_sixteen_bit_dqt_rejected(gray_file):
    start, _ = segment_span(gray_file, "DQT")
    patched = bytearray(gray_file)
    patched[start + 4] |= 0x10  # Pq=1
    with pytest.raises(UnsupportedFeatureError, match="16-bit"):
        jfif.parse_jpeg(bytes(patched))


def test_missing_soi_rejected():
    with pytest.raises(CorruptStreamError, match="SOI"):
        jfif.parse_jpeg(b"\x00\x01\x02\x03")


def test_eoi_before_scan_rejected():
    with pytest.raises(CorruptStreamError):
        jfif.parse_jpeg(bytes([0xFF, 0xD8, 0xFF, 0xD9]))


def test_inconsistent_length_detected(gray_file):
    start, _ = segment_span(gray_file, "SOF0")
    patched = bytearray(gray_file)
    patched[start + 2] = 0xFF  # absurd segment length
    problems = jfif.validate_structure(bytes(patched))
    assert problems and "length" in problems[0]


def test_validator_flags_wrong_order(gray_file):
    # move APP0 after DQT: structurally parseable but not our layout
    app0 = segment_span(gray_file, "APP0")
    dqt = segment_span(gray_file, "DQT")
    patched = (
        gray_file[:app0[0]]
        + gray_file[app0[1]:dqt[1]]
        + gray_file[app0[0]:app0[1]]
        + gray_file[dqt[1]:]
    )
    problems = jfif.validate_structure(patched)
    assert problems and "order" in problems[0]


def test_decoder_uses_tables_from_the_file(gray_file):
    # doubling the stored DC step must change decoded pixels: the decoder
    # has no channel back to the encoder's in-memory table
    baseline = decode_image(gray_file)
    start, _ = segment_span(gray_file, "DQT")
    patched = bytearray(gray_file)
    patched[start + 5] = 64  # zig-zag slot 0 (DC step), was 8
    altered = decode_image(bytes(patched))
    assert not np.array_equal(baseline.planes[0], altered.planes[0])
