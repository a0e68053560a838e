"""Baseline JPEG entropy coding: DPCM-coded DC, run-length coded AC, Huffman.

The default code tables are the ITU T.81 Annex K set.  Decoding uses a
16-bit prefix lookup table per Huffman table, so each symbol costs one
peek and one dict-free list index.
"""

import functools
from bisect import bisect_right

import numpy as np

from .errors import CorruptStreamError, EncodingRangeError, InvalidInputError

# 8-bit baseline: AC coefficients are coded by magnitude category <= 10.
# DC is DPCM-coded, so its own bound is the 8-bit DCT range (|dc| <= 1024)
# plus the requirement that every difference fits category <= 11.
MAX_AC = 1023
MAX_DC = 1024
MAX_DC_DIFF = 2047

# Annex K default Huffman table specifications (BITS, HUFFVAL).
DC_LUMA_BITS = (0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0)
DC_LUMA_VALUES = tuple(range(12))

DC_CHROMA_BITS = (0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0)
DC_CHROMA_VALUES = tuple(range(12))

AC_LUMA_BITS = (0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125)
AC_LUMA_VALUES = (
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12,
    0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07,
    0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08,
    0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52, 0xD1, 0xF0,
    0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0A, 0x16,
    0x17, 0x18, 0x19, 0x1A, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2A, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39,
    0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49,
    0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
    0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69,
    0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79,
    0x7A, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98,
    0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7,
    0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6,
    0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5,
    0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4,
    0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2,
    0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA,
    0xF1, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8,
    0xF9, 0xFA,
)

AC_CHROMA_BITS = (0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 119)
AC_CHROMA_VALUES = (
    0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21,
    0x31, 0x06, 0x12, 0x41, 0x51, 0x07, 0x61, 0x71,
    0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91,
    0xA1, 0xB1, 0xC1, 0x09, 0x23, 0x33, 0x52, 0xF0,
    0x15, 0x62, 0x72, 0xD1, 0x0A, 0x16, 0x24, 0x34,
    0xE1, 0x25, 0xF1, 0x17, 0x18, 0x19, 0x1A, 0x26,
    0x27, 0x28, 0x29, 0x2A, 0x35, 0x36, 0x37, 0x38,
    0x39, 0x3A, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48,
    0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58,
    0x59, 0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68,
    0x69, 0x6A, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78,
    0x79, 0x7A, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87,
    0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96,
    0x97, 0x98, 0x99, 0x9A, 0xA2, 0xA3, 0xA4, 0xA5,
    0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4,
    0xB5, 0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3,
    0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9, 0xCA, 0xD2,
    0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA,
    0xE2, 0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9,
    0xEA, 0xF2, 0xF3, 0xF4, 0xF5, 0xF6, 0xF7, 0xF8,
    0xF9, 0xFA,
)

_LUT_BITS = 16


@functools.lru_cache(maxsize=64)
def _build_tables(bits, values):
    """Canonical code assignment plus the 16-bit prefix decode table."""
    encode = {}
    lut = [None] * (1 << _LUT_BITS)
    code = 0
    idx = 0
    for length in range(1, 17):
        for _ in range(bits[length - 1]):
            symbol = values[idx]
            encode[symbol] = (code, length)
            start = code << (_LUT_BITS - length)
            span = 1 << (_LUT_BITS - length)
            lut[start:start + span] = [(symbol, length)] * span
            idx += 1
            code += 1
        code <<= 1
    return encode, lut


class HuffmanTable:
    """One DHT-style Huffman table (16 length counts + symbol values)."""

    def __init__(self, bits, values):
        bits = tuple(int(b) for b in bits)
        values = tuple(int(v) for v in values)
        if len(bits) != 16:
            raise InvalidInputError("Huffman BITS must have 16 entries")
        if sum(bits) != len(values):
            raise InvalidInputError(
                f"Huffman table declares {sum(bits)} codes but lists {len(values)} values"
            )
        self.bits = bits
        self.values = values
        self.encode_map, self.decode_lut = _build_tables(bits, values)


DC_LUMA = HuffmanTable(DC_LUMA_BITS, DC_LUMA_VALUES)
DC_CHROMA = HuffmanTable(DC_CHROMA_BITS, DC_CHROMA_VALUES)
AC_LUMA = HuffmanTable(AC_LUMA_BITS, AC_LUMA_VALUES)
AC_CHROMA = HuffmanTable(AC_CHROMA_BITS, AC_CHROMA_VALUES)


def _value_bits(value, size):
    # T.81 coding of the extra bits: negatives use the one's-complement form.
    return value if value >= 0 else value + (1 << size) - 1


def _extend(raw, size):
    if raw < (1 << (size - 1)):
        return raw - (1 << size) + 1
    return raw


class BitWriter:
    """Big-endian bit sink with JPEG 0xFF byte stuffing; pads with 1s."""

    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._n = 0

    def write(self, value, nbits):
        self._acc = (self._acc << nbits) | (value & ((1 << nbits) - 1))
        self._n += nbits
        while self._n >= 8:
            self._n -= 8
            byte = (self._acc >> self._n) & 0xFF
            self._buf.append(byte)
            if byte == 0xFF:
                self._buf.append(0x00)
        self._acc &= (1 << self._n) - 1

    def getvalue(self):
        if self._n:
            pad = 8 - self._n
            self.write((1 << pad) - 1, pad)
        return bytes(self._buf)


class BitReader:
    """Reads an unstuffed scan stream; refuses to consume past its end.

    ``base_offset`` positions error messages within the original file.
    """

    def __init__(self, data, base_offset=0):
        self._buf, self._stuff_positions = _unstuff(data, base_offset)
        self._base = base_offset
        self._total = 8 * len(self._buf)
        self._consumed = 0
        self._pos = 0
        self._acc = 0
        self._n = 0

    def _fill(self, need):
        while self._n < need:
            if self._pos < len(self._buf):
                self._acc = (self._acc << 8) | self._buf[self._pos]
                self._pos += 1
            else:
                self._acc = (self._acc << 8) | 0xFF  # virtual pad, never consumable
            self._n += 8

    def peek(self, nbits):
        self._fill(nbits)
        return (self._acc >> (self._n - nbits)) & ((1 << nbits) - 1)

    def skip(self, nbits):
        self._fill(nbits)
        self._consumed += nbits
        if self._consumed > self._total:
            raise CorruptStreamError("truncated scan data", offset=self.offset())
        self._n -= nbits
        self._acc &= (1 << self._n) - 1

    def read(self, nbits):
        value = self.peek(nbits)
        self.skip(nbits)
        return value

    def offset(self):
        """Original-file byte offset of the next unconsumed bit."""
        unstuffed = min(self._consumed // 8, len(self._buf))
        return self._base + unstuffed + bisect_right(self._stuff_positions, unstuffed)

    def remaining_bits(self):
        return self._total - self._consumed


def _unstuff(data, base_offset):
    """Remove 0xFF00 stuffing; reject bare markers and trailing 0xFF."""
    out = bytearray()
    stuff_positions = []
    i = 0
    n = len(data)
    while True:
        j = data.find(0xFF, i)
        if j < 0:
            out += data[i:]
            break
        out += data[i:j + 1]
        if j + 1 >= n:
            raise CorruptStreamError(
                "scan data ends mid byte-stuffing", offset=base_offset + j
            )
        follow = data[j + 1]
        if follow != 0x00:
            raise CorruptStreamError(
                f"marker byte 0xFF{follow:02X} inside scan data",
                offset=base_offset + j,
            )
        stuff_positions.append(len(out))
        i = j + 2
    return bytes(out), stuff_positions


def _read_symbol(reader, lut):
    entry = lut[reader.peek(_LUT_BITS)]
    if entry is None:
        raise CorruptStreamError("invalid Huffman prefix", offset=reader.offset())
    symbol, length = entry
    reader.skip(length)
    return symbol


def _encode_block(writer, zz, pred, dc_map, ac_map):
    dc = int(zz[0])
    diff = dc - pred
    if abs(diff) > MAX_DC_DIFF:
        raise EncodingRangeError(
            f"DC difference {diff} exceeds category 11 (8-bit baseline)"
        )
    size = abs(diff).bit_length()
    code, length = dc_map[size]
    if size:
        writer.write((code << size) | _value_bits(diff, size), length + size)
    else:
        writer.write(code, length)

    nonzero = np.nonzero(zz[1:])[0]
    prev = 0
    for pos in nonzero:
        run = int(pos) - prev
        while run > 15:
            zcode, zlen = ac_map[0xF0]
            writer.write(zcode, zlen)
            run -= 16
        value = int(zz[1 + pos])
        size = abs(value).bit_length()
        code, length = ac_map[(run << 4) | size]
        writer.write((code << size) | _value_bits(value, size), length + size)
        prev = int(pos) + 1
    if prev != 63:
        code, length = ac_map[0x00]  # EOB
        writer.write(code, length)
    return dc


def _decode_block(reader, out, pred, dc_lut, ac_lut):
    size = _read_symbol(reader, dc_lut)
    if size > 11:
        raise CorruptStreamError(
            f"invalid DC magnitude category {size}", offset=reader.offset()
        )
    diff = _extend(reader.read(size), size) if size else 0
    dc = pred + diff
    out[0] = dc
    k = 1
    while k < 64:
        rs = _read_symbol(reader, ac_lut)
        run, size = rs >> 4, rs & 0x0F
        if size == 0:
            if rs == 0x00:  # EOB
                return dc
            if rs == 0xF0:  # ZRL
                k += 16
                if k > 64:
                    raise CorruptStreamError(
                        "zero run past end of block", offset=reader.offset()
                    )
                continue
            raise CorruptStreamError(
                f"invalid AC symbol 0x{rs:02X}", offset=reader.offset()
            )
        k += run
        if k > 63:
            raise CorruptStreamError(
                "coefficient run past end of block", offset=reader.offset()
            )
        out[k] = _extend(reader.read(size), size)
        k += 1
    return dc


def entropy_encode(component_blocks, dc_tables, ac_tables):
    """Encode per-component zig-zag block arrays into one scan bitstream.

    ``component_blocks`` holds one (n_mcus, 64) integer array per component;
    blocks are interleaved one per component per MCU (4:4:4 layout).
    """
    if not component_blocks:
        raise InvalidInputError("no components to encode")
    n_comp = len(component_blocks)
    if not (len(dc_tables) == len(ac_tables) == n_comp):
        raise InvalidInputError("need one DC and one AC table per component")
    arrays = []
    n_mcus = None
    for blocks in component_blocks:
        arr = np.asarray(blocks, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 64:
            raise InvalidInputError(f"expected (n, 64) block array, got {arr.shape}")
        if n_mcus is None:
            n_mcus = arr.shape[0]
        elif arr.shape[0] != n_mcus:
            raise InvalidInputError("components disagree on MCU count")
        if arr.size:
            if np.abs(arr[:, 1:]).max() > MAX_AC:
                raise EncodingRangeError(
                    f"AC coefficient magnitude exceeds {MAX_AC} "
                    "(category 10, 8-bit baseline)"
                )
            if np.abs(arr[:, 0]).max() > MAX_DC:
                raise EncodingRangeError(
                    f"DC coefficient magnitude exceeds {MAX_DC} (8-bit DCT range)"
                )
        arrays.append(arr)

    writer = BitWriter()
    preds = [0] * n_comp
    dc_maps = [t.encode_map for t in dc_tables]
    ac_maps = [t.encode_map for t in ac_tables]
    for mcu in range(n_mcus):
        for c in range(n_comp):
            preds[c] = _encode_block(
                writer, arrays[c][mcu], preds[c], dc_maps[c], ac_maps[c]
            )
    return writer.getvalue()


def entropy_decode(data, n_mcus, dc_tables, ac_tables, base_offset=0):
    """Exact inverse of :func:`entropy_encode`.

    Returns one (n_mcus, 64) int32 zig-zag array per component.  Raises
    :class:`CorruptStreamError` (with a byte offset) for invalid prefixes,
    truncation, or bare markers inside the scan.
    """
    n_comp = len(dc_tables)
    if len(ac_tables) != n_comp:
        raise InvalidInputError("need one DC and one AC table per component")
    reader = BitReader(data, base_offset)
    out = [np.zeros((n_mcus, 64), dtype=np.int32) for _ in range(n_comp)]
    preds = [0] * n_comp
    dc_luts = [t.decode_lut for t in dc_tables]
    ac_luts = [t.decode_lut for t in ac_tables]
    for mcu in range(n_mcus):
        for c in range(n_comp):
            preds[c] = _decode_block(
                reader, out[c][mcu], preds[c], dc_luts[c], ac_luts[c]
            )
    if reader.remaining_bits() >= 8:
        raise CorruptStreamError(
            "trailing data after final block", offset=reader.offset()
        )
    return out
