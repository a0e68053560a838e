"""Baseline sequential JPEG encoder and decoder (4:4:4, caller-supplied tables).

Encoder and decoder keep no shared state: every call builds its own
entropy-coding session, and decoding uses only tables parsed back out of
the DQT/DHT segments of the file itself.
"""

from . import huffman, jfif
from .blocks import assemble_plane, block_grid, partition_blocks
from .color import color_convert_forward, color_convert_inverse
from .dct import forward_dct, inverse_dct
from .errors import (
    InvalidInputError,
    UnsupportedFeatureError,
    UnsupportedSizeError,
)
from .image import RasterImage
from .quant import QuantTable, dequantize, inverse_zigzag, quantize, zigzag

MAX_DIMENSION = 65535


def _plane_to_scan_blocks(plane, table, drop_zigzag):
    """plane -> level shift -> DCT -> quantize -> zig-zag (n, 64) int array."""
    h, w = plane.shape
    blocks = partition_blocks(plane, w, h)
    coeffs = forward_dct(blocks)
    quantized = quantize(coeffs, table)
    scan = zigzag(quantized.reshape(-1, 64))
    if drop_zigzag:
        scan[:, sorted(drop_zigzag)] = 0
    return scan


def encode_image(img, luma_table, chroma_table=None, *, drop_zigzag=()):
    """Encode a RasterImage into a JFIF byte stream.

    ``chroma_table=None`` selects single-table mode: the luma table is used
    for every component.  ``drop_zigzag`` lists zig-zag positions whose
    quantized coefficients are forced to zero in every block (the
    high-frequency removal baseline).
    """
    if img.width > MAX_DIMENSION or img.height > MAX_DIMENSION:
        raise UnsupportedSizeError(
            f"{img.width}x{img.height} exceeds the {MAX_DIMENSION} JFIF limit"
        )
    drop = frozenset(int(p) for p in drop_zigzag)
    if drop and (min(drop) < 0 or max(drop) > 63):
        raise InvalidInputError("drop positions must be zig-zag indices 0..63")

    single_table = chroma_table is None
    if img.channels == 1:
        planes = [img.planes[0]]
        tq_ids = [0]
        qtables = [(0, luma_table)]
        dc_tables = [huffman.DC_LUMA]
        ac_tables = [huffman.AC_LUMA]
        dht_specs = [(0, 0, huffman.DC_LUMA), (1, 0, huffman.AC_LUMA)]
        sof_components = [(1, 1, 1, 0)]
        sos_components = [(1, 0, 0)]
        plane_tables = [luma_table]
    else:
        planes = list(color_convert_forward(img))
        if single_table:
            tq_ids = [0, 0, 0]
            qtables = [(0, luma_table)]
            plane_tables = [luma_table] * 3
        else:
            tq_ids = [0, 1, 1]
            qtables = [(0, luma_table), (1, chroma_table)]
            plane_tables = [luma_table, chroma_table, chroma_table]
        dc_tables = [huffman.DC_LUMA, huffman.DC_CHROMA, huffman.DC_CHROMA]
        ac_tables = [huffman.AC_LUMA, huffman.AC_CHROMA, huffman.AC_CHROMA]
        dht_specs = [
            (0, 0, huffman.DC_LUMA), (1, 0, huffman.AC_LUMA),
            (0, 1, huffman.DC_CHROMA), (1, 1, huffman.AC_CHROMA),
        ]
        sof_components = [(1, 1, 1, tq_ids[0]), (2, 1, 1, tq_ids[1]), (3, 1, 1, tq_ids[2])]
        sos_components = [(1, 0, 0), (2, 1, 1), (3, 1, 1)]

    component_blocks = [
        _plane_to_scan_blocks(p, t, drop) for p, t in zip(planes, plane_tables)
    ]
    scan = huffman.entropy_encode(component_blocks, dc_tables, ac_tables)

    parts = [bytes([0xFF, jfif.SOI])]
    parts.append(jfif.app0_segment())
    for table_id, table in qtables:
        parts.append(jfif.dqt_segment(table_id, table))
    parts.append(jfif.sof0_segment(img.width, img.height, sof_components))
    for table_class, table_id, table in dht_specs:
        parts.append(jfif.dht_segment(table_class, table_id, table))
    parts.append(jfif.sos_segment(sos_components))
    parts.append(scan)
    parts.append(bytes([0xFF, jfif.EOI]))
    return b"".join(parts)


def decode_coefficients(data):
    """Parse a file and return its quantized coefficient blocks.

    Returns (blocks, tables): one (n_blocks, 64) natural-order int array and
    one QuantTable per component.  Useful for inspecting what an encoder
    actually stored (e.g. which bands were zeroed).
    """
    parsed = jfif.parse_jpeg(bytes(data))
    _check_baseline_subset(parsed)
    rows, cols = block_grid(parsed.width, parsed.height)
    scans = huffman.entropy_decode(
        parsed.scan_data,
        rows * cols,
        [huffman.HuffmanTable(*parsed.htables[(0, c.dc_id)]) for c in parsed.components],
        [huffman.HuffmanTable(*parsed.htables[(1, c.ac_id)]) for c in parsed.components],
        base_offset=parsed.scan_offset,
    )
    blocks = [inverse_zigzag(scan) for scan in scans]
    tables = [QuantTable(parsed.qtables[c.tq]) for c in parsed.components]
    return blocks, tables


def _check_baseline_subset(parsed):
    n_comp = len(parsed.components)
    if n_comp not in (1, 3):
        raise UnsupportedFeatureError(f"{n_comp}-component frames are not supported")
    for comp in parsed.components:
        if (comp.h, comp.v) != (1, 1):
            raise UnsupportedFeatureError(
                f"SOF0 declares a subsampled component "
                f"(sampling {comp.h}x{comp.v}); only 1x1 is supported"
            )
        if comp.tq not in parsed.qtables:
            raise UnsupportedFeatureError(f"missing DQT marker for table {comp.tq}")
        for table_class, table_id in ((0, comp.dc_id), (1, comp.ac_id)):
            if (table_class, table_id) not in parsed.htables:
                raise UnsupportedFeatureError(
                    f"missing DHT marker for table class {table_class} id {table_id}"
                )


def decode_image(data):
    """Decode a baseline sequential JFIF byte stream to a RasterImage."""
    parsed = jfif.parse_jpeg(bytes(data))
    _check_baseline_subset(parsed)
    n_comp = len(parsed.components)
    rows, cols = block_grid(parsed.width, parsed.height)
    n_mcus = rows * cols
    dc_tables = [
        huffman.HuffmanTable(*parsed.htables[(0, c.dc_id)]) for c in parsed.components
    ]
    ac_tables = [
        huffman.HuffmanTable(*parsed.htables[(1, c.ac_id)]) for c in parsed.components
    ]
    scans = huffman.entropy_decode(
        parsed.scan_data, n_mcus, dc_tables, ac_tables, base_offset=parsed.scan_offset
    )

    planes = []
    for comp, scan in zip(parsed.components, scans):
        table = QuantTable(parsed.qtables[comp.tq])
        natural = inverse_zigzag(scan)
        coeffs = dequantize(natural.reshape(-1, 8, 8), table)
        pixels = inverse_dct(coeffs)
        planes.append(assemble_plane(pixels, parsed.width, parsed.height))

    if n_comp == 1:
        return RasterImage(parsed.width, parsed.height, (planes[0],))
    return color_convert_inverse(*planes)
