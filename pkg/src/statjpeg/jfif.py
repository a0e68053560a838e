"""JFIF 1.01 marker segments: writer, parser, and structure validator.

Only the baseline sequential subset is handled: 8-bit precision, SOF0,
1x1 sampling, 8-bit DQT entries, Huffman coding, no restart intervals.
"""

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import CorruptStreamError, UnsupportedFeatureError
from .quant import ZIGZAG_INDEX, inverse_zigzag

SOI = 0xD8
EOI = 0xD9
SOS = 0xDA
DQT = 0xDB
DHT = 0xC4
SOF0 = 0xC0
APP0 = 0xE0
COM = 0xFE
DRI = 0xDD
DNL = 0xDC

_SOF_NAMES = {
    0xC0: "SOF0", 0xC1: "SOF1", 0xC2: "SOF2", 0xC3: "SOF3",
    0xC5: "SOF5", 0xC6: "SOF6", 0xC7: "SOF7",
    0xC9: "SOF9", 0xCA: "SOF10", 0xCB: "SOF11",
    0xCD: "SOF13", 0xCE: "SOF14", 0xCF: "SOF15",
}


def _segment(marker, payload):
    return struct.pack(">BBH", 0xFF, marker, len(payload) + 2) + payload


def app0_segment():
    """JFIF 1.01, no units, 1x1 density, no thumbnail."""
    return _segment(APP0, b"JFIF\x00" + struct.pack(">BBBHHBB", 1, 1, 0, 1, 1, 0, 0))


def dqt_segment(table_id, table):
    """8-bit precision (Pq=0) table, entries stored in zig-zag order."""
    zz = table.values[ZIGZAG_INDEX]
    return _segment(DQT, struct.pack("B", table_id) + bytes(int(v) for v in zz))


def sof0_segment(width, height, components):
    """``components``: sequence of (component_id, h, v, quant_table_id)."""
    payload = struct.pack(">BHHB", 8, height, width, len(components))
    for ident, h, v, tq in components:
        payload += struct.pack("BBB", ident, (h << 4) | v, tq)
    return _segment(SOF0, payload)


def dht_segment(table_class, table_id, table):
    payload = struct.pack("B", (table_class << 4) | table_id)
    payload += bytes(table.bits) + bytes(table.values)
    return _segment(DHT, payload)


def sos_segment(components):
    """``components``: sequence of (component_id, dc_table_id, ac_table_id)."""
    payload = struct.pack("B", len(components))
    for ident, dc_id, ac_id in components:
        payload += struct.pack("BB", ident, (dc_id << 4) | ac_id)
    payload += struct.pack("BBB", 0, 63, 0)
    return _segment(SOS, payload)


@dataclass
class FrameComponent:
    ident: int
    h: int
    v: int
    tq: int
    dc_id: int = None
    ac_id: int = None


@dataclass
class ParsedJpeg:
    width: int = 0
    height: int = 0
    components: list = field(default_factory=list)
    qtables: dict = field(default_factory=dict)      # id -> 64 natural-order ints
    htables: dict = field(default_factory=dict)      # (class, id) -> (bits, values)
    scan_offset: int = 0
    scan_data: bytes = b""


class _Walker:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def need(self, n, what):
        if self.pos + n > len(self.data):
            raise CorruptStreamError(f"truncated {what}", offset=self.pos)

    def u8(self, what="byte"):
        self.need(1, what)
        v = self.data[self.pos]
        self.pos += 1
        return v

    def u16(self, what="field"):
        self.need(2, what)
        v = struct.unpack_from(">H", self.data, self.pos)[0]
        self.pos += 2
        return v

    def take(self, n, what="payload"):
        self.need(n, what)
        v = self.data[self.pos:self.pos + n]
        self.pos += n
        return v


def _parse_dqt(payload, offset, tables):
    w = _Walker(payload)
    while w.pos < len(payload):
        pq_tq = w.u8("DQT header")
        pq, tq = pq_tq >> 4, pq_tq & 0x0F
        if pq != 0:
            raise UnsupportedFeatureError("DQT with 16-bit precision (Pq=1)")
        zz = np.frombuffer(w.take(64, "DQT entries"), dtype=np.uint8).astype(np.int64)
        tables[tq] = inverse_zigzag(zz)


def _parse_dht(payload, offset, tables):
    w = _Walker(payload)
    while w.pos < len(payload):
        tc_th = w.u8("DHT header")
        tc, th = tc_th >> 4, tc_th & 0x0F
        bits = tuple(w.take(16, "DHT code counts"))
        values = tuple(w.take(sum(bits), "DHT symbols"))
        tables[(tc, th)] = (bits, values)


def _parse_sof0(payload, offset, parsed):
    w = _Walker(payload)
    precision = w.u8()
    if precision != 8:
        raise UnsupportedFeatureError(f"SOF0 with {precision}-bit precision")
    parsed.height = w.u16()
    parsed.width = w.u16()
    n = w.u8()
    if parsed.height == 0:
        raise UnsupportedFeatureError("SOF0 with deferred height (DNL)")
    for _ in range(n):
        ident = w.u8()
        hv = w.u8()
        tq = w.u8()
        parsed.components.append(FrameComponent(ident, hv >> 4, hv & 0x0F, tq))


def _parse_sos_header(payload, offset, parsed):
    w = _Walker(payload)
    n = w.u8()
    if n != len(parsed.components):
        raise UnsupportedFeatureError(
            "SOS component count differs from SOF0 (multi-scan file)"
        )
    by_ident = {c.ident: c for c in parsed.components}
    for _ in range(n):
        ident = w.u8()
        tbl = w.u8()
        if ident not in by_ident:
            raise CorruptStreamError(
                f"SOS references unknown component {ident}", offset=offset
            )
        by_ident[ident].dc_id = tbl >> 4
        by_ident[ident].ac_id = tbl & 0x0F
    ss, se, a = w.u8(), w.u8(), w.u8()
    if (ss, se, a) != (0, 63, 0):
        raise UnsupportedFeatureError(
            f"SOS spectral selection {ss}..{se}/{a} (not baseline)"
        )


def _find_scan_end(data, start):
    """Scan bytes end at the first marker that is not byte stuffing."""
    i = start
    while True:
        j = data.find(b"\xff", i)
        if j < 0 or j + 1 >= len(data):
            raise CorruptStreamError("scan data ends without EOI", offset=len(data))
        follow = data[j + 1]
        if follow == 0x00:
            i = j + 2
            continue
        if 0xD0 <= follow <= 0xD7:
            raise UnsupportedFeatureError(f"RST{follow - 0xD0} restart marker in scan")
        return j, follow


def parse_jpeg(data):
    """Parse a baseline JFIF byte stream into tables, geometry, and scan data."""
    if len(data) < 4 or data[0] != 0xFF or data[1] != SOI:
        raise CorruptStreamError("missing SOI marker", offset=0)
    parsed = ParsedJpeg()
    seen_sof = False
    pos = 2
    while True:
        if pos + 2 > len(data):
            raise CorruptStreamError("file ends before SOS", offset=pos)
        if data[pos] != 0xFF:
            raise CorruptStreamError(
                f"expected marker, found 0x{data[pos]:02X}", offset=pos
            )
        marker = data[pos + 1]
        if marker == 0xFF:  # fill byte
            pos += 1
            continue
        seg_start = pos
        pos += 2
        if marker == EOI:
            raise CorruptStreamError("EOI before any scan data", offset=seg_start)
        if marker == SOI:
            raise UnsupportedFeatureError("duplicate SOI marker")
        if marker in _SOF_NAMES and marker != SOF0:
            name = _SOF_NAMES[marker]
            kind = " (progressive)" if marker == 0xC2 else ""
            raise UnsupportedFeatureError(f"{name}{kind} frames are not supported")
        if marker == DRI:
            raise UnsupportedFeatureError("DRI restart intervals are not supported")

        length = struct.unpack_from(">H", data, pos)[0] if pos + 2 <= len(data) else 0
        if length < 2 or pos + length > len(data):
            raise CorruptStreamError(
                f"segment 0xFF{marker:02X} has inconsistent length", offset=seg_start
            )
        payload = data[pos + 2:pos + length]
        pos += length

        if marker == DQT:
            _parse_dqt(payload, seg_start, parsed.qtables)
        elif marker == DHT:
            _parse_dht(payload, seg_start, parsed.htables)
        elif marker == SOF0:
            if seen_sof:
                raise UnsupportedFeatureError("duplicate SOF0 marker")
            seen_sof = True
            _parse_sof0(payload, seg_start, parsed)
        elif marker == SOS:
            if not seen_sof:
                raise UnsupportedFeatureError("missing SOF0 marker before SOS")
            _parse_sos_header(payload, seg_start, parsed)
            scan_start = pos
            scan_end, next_marker = _find_scan_end(data, scan_start)
            if next_marker != EOI:
                raise CorruptStreamError(
                    f"unexpected marker 0xFF{next_marker:02X} after scan",
                    offset=scan_end,
                )
            parsed.scan_offset = scan_start
            parsed.scan_data = data[scan_start:scan_end]
            return parsed
        # APPn / COM / other tableless segments are skipped.


REQUIRED_ORDER = ("SOI", "APP0", "DQT", "SOF0", "DHT", "SOS", "EOI")


def list_markers(data):
    """Walk all marker segments, checking declared lengths stay in bounds.

    Returns [(name, offset)] including the entropy-coded span as 'scan'.
    """
    names = {SOI: "SOI", EOI: "EOI", SOS: "SOS", DQT: "DQT", DHT: "DHT",
             SOF0: "SOF0", COM: "COM", DRI: "DRI", DNL: "DNL"}
    names.update(_SOF_NAMES)
    names.update({APP0 + n: f"APP{n}" for n in range(16)})
    out = []
    if len(data) < 2 or data[:2] != b"\xff\xd8":
        raise CorruptStreamError("missing SOI marker", offset=0)
    out.append(("SOI", 0))
    pos = 2
    while pos < len(data):
        if data[pos] != 0xFF:
            raise CorruptStreamError(f"expected marker at 0x{pos:X}", offset=pos)
        marker = data[pos + 1] if pos + 1 < len(data) else None
        if marker is None:
            raise CorruptStreamError("dangling 0xFF at end of file", offset=pos)
        name = names.get(marker, f"0xFF{marker:02X}")
        out.append((name, pos))
        if marker == EOI:
            return out
        pos += 2
        if marker == SOI or 0xD0 <= marker <= 0xD7:
            continue  # standalone markers
        if pos + 2 > len(data):
            raise CorruptStreamError(f"truncated {name} segment", offset=pos)
        length = struct.unpack_from(">H", data, pos)[0]
        if length < 2 or pos + length > len(data):
            raise CorruptStreamError(f"{name} length inconsistent", offset=pos)
        pos += length
        if marker == SOS:
            end, follow = _find_scan_end(data, pos)
            out.append(("scan", pos))
            pos = end
    raise CorruptStreamError("file ends without EOI", offset=len(data))


def validate_structure(data):
    """Check the strict marker layout this encoder promises to emit.

    Returns a list of problems; an empty list means the file conforms:
    SOI, APP0(JFIF 1.01), DQT+, SOF0, DHT+, SOS, scan, EOI, in that order,
    with every declared segment length consistent.
    """
    problems = []
    try:
        markers = list_markers(data)
    except (CorruptStreamError, UnsupportedFeatureError) as exc:
        return [str(exc)]

    sequence = [name for name, _ in markers if name != "scan"]
    collapsed = []
    for name in sequence:
        if not collapsed or collapsed[-1] != name:
            collapsed.append(name)
    if tuple(collapsed) != REQUIRED_ORDER:
        problems.append(
            f"marker order {'>'.join(collapsed)} != {'>'.join(REQUIRED_ORDER)}"
        )
    app0 = [off for name, off in markers if name == "APP0"]
    if app0:
        off = app0[0]
        ident = data[off + 4:off + 9]
        version = data[off + 9:off + 11]
        if ident != b"JFIF\x00":
            problems.append("APP0 identifier is not JFIF")
        elif version != b"\x01\x01":
            problems.append(f"JFIF version {version.hex()} != 0101")
    if not data.endswith(b"\xff\xd9"):
        problems.append("file does not end with EOI")
    return problems
