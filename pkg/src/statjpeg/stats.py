"""Dataset frequency statistics: interval sampling of a class-per-directory
corpus, block-wise DCT, and per-band streaming mean/deviation accumulators.

The per-band spread (population standard deviation of the un-quantized DCT
coefficients) is the signal the table designer maps to quantization steps.
"""

import csv
import json
import warnings
from dataclasses import dataclass

import numpy as np

from .blocks import partition_blocks
from .color import color_convert_forward
from .dct import forward_dct
from .errors import (
    EmptySampleWarning,
    InsufficientDataError,
    InvalidInputError,
    SchemaVersionError,
)
from .quant import ZIGZAG_POSITION

LUMA_ONLY = "luma"
PER_CHANNEL = "per-channel"

N_BANDS = 64
STATS_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SampleSpec:
    """Interval sampling configuration: keep every k-th image of each class."""

    interval_k: int = 1
    channel_mode: str = LUMA_ONLY

    def __post_init__(self):
        if self.interval_k < 1:
            raise InvalidInputError(f"interval_k must be >= 1, got {self.interval_k}")
        if self.channel_mode not in (LUMA_ONLY, PER_CHANNEL):
            raise InvalidInputError(f"unknown channel mode {self.channel_mode!r}")


def sample_images(manifest, spec):
    """Select every k-th image per class, visiting classes in manifest order.

    The running counter m starts at 1 within each class; an image is kept
    when m % k == 0.  Warns (EmptySampleWarning) when nothing is selected.
    """
    if not manifest.classes:
        raise InvalidInputError("corpus manifest has no classes")
    selected = []
    k = spec.interval_k
    for _, paths in manifest.classes:
        for m, path in enumerate(paths, start=1):
            if m % k == 0:
                selected.append(path)
    if not selected:
        warnings.warn(
            f"interval k={k} selected no images from any class",
            EmptySampleWarning,
            stacklevel=2,
        )
    return selected


class BandAccumulator:
    """Streaming mean/variance for one frequency band (Welford form).

    ``m2`` is the running sum of squared deviations; merging two
    accumulators uses the parallel-combination formula, so accumulation
    order only perturbs results at floating-point level.
    """

    __slots__ = ("count", "mean", "m2")

    def __init__(self, count=0, mean=0.0, m2=0.0):
        self.count = count
        self.mean = mean
        self.m2 = m2

    def update(self, value):
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)

    def merge_stats(self, count, mean, m2):
        if count == 0:
            return
        total = self.count + count
        delta = mean - self.mean
        self.mean += delta * count / total
        self.m2 += m2 + delta * delta * self.count * count / total
        self.count = total

    def update_batch(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.size == 0:
            return
        mean = float(values.mean())
        m2 = float(((values - mean) ** 2).sum())
        self.merge_stats(values.size, mean, m2)

    def merge(self, other):
        self.merge_stats(other.count, other.mean, other.m2)

    @property
    def stddev(self):
        """Population standard deviation sqrt(m2 / count)."""
        if self.count == 0:
            return 0.0
        return float(np.sqrt(max(self.m2, 0.0) / self.count))

    def copy(self):
        return BandAccumulator(self.count, self.mean, self.m2)


def rank_bands(deltas):
    """Band indices sorted by descending spread, ties by zig-zag position."""
    deltas = np.asarray(deltas, dtype=np.float64)
    if deltas.shape != (N_BANDS,):
        raise InvalidInputError(f"expected 64 values, got shape {deltas.shape}")
    return np.lexsort((ZIGZAG_POSITION, -deltas))


class FrequencyStats:
    """Per-channel, per-band coefficient statistics over a sampled corpus.

    Channels are 'y' (always) and, in per-channel mode, 'chroma' (Cb and Cr
    pooled).  Single instances are not thread-safe; accumulate per image in
    parallel and combine with :meth:`merge`.
    """

    def __init__(self, channel_mode=LUMA_ONLY, source_digest=None):
        if channel_mode not in (LUMA_ONLY, PER_CHANNEL):
            raise InvalidInputError(f"unknown channel mode {channel_mode!r}")
        self.channel_mode = channel_mode
        self.source_digest = source_digest
        channels = ["y"] if channel_mode == LUMA_ONLY else ["y", "chroma"]
        self.bands = {
            name: [BandAccumulator() for _ in range(N_BANDS)] for name in channels
        }

    def _channel_planes(self, img):
        if self.channel_mode == LUMA_ONLY:
            if img.channels == 3:
                return {"y": [color_convert_forward(img)[0]]}
            return {"y": [img.planes[0]]}
        if img.channels != 3:
            raise InvalidInputError(
                "per-channel statistics need 3-channel images"
            )
        y, cb, cr = color_convert_forward(img)
        return {"y": [y], "chroma": [cb, cr]}

    def accumulate_image(self, img):
        """Fold every 8x8 block's un-quantized DCT coefficients in."""
        for channel, planes in self._channel_planes(img).items():
            accs = self.bands[channel]
            for plane in planes:
                coeffs = forward_dct(partition_blocks(plane)).reshape(-1, N_BANDS)
                means = coeffs.mean(axis=0)
                m2s = ((coeffs - means) ** 2).sum(axis=0)
                n = coeffs.shape[0]
                for band in range(N_BANDS):
                    accs[band].merge_stats(n, float(means[band]), float(m2s[band]))
        return self

    def merge(self, other):
        if other.channel_mode != self.channel_mode:
            raise InvalidInputError("cannot merge stats with different channel modes")
        for channel, accs in self.bands.items():
            for mine, theirs in zip(accs, other.bands[channel]):
                mine.merge(theirs)
        return self

    @property
    def total_blocks(self):
        return sum(accs[0].count for accs in self.bands.values())

    def finalize(self):
        """Freeze into a :class:`FrequencySummary`; needs >= 2 blocks per band."""
        channels = {}
        for channel, accs in self.bands.items():
            if accs[0].count < 2:
                raise InsufficientDataError(
                    f"channel {channel!r} has only {accs[0].count} blocks; "
                    "need at least 2"
                )
            channels[channel] = tuple(
                BandStats(a.count, a.mean, a.stddev) for a in accs
            )
        return FrequencySummary(channels, self.total_blocks, self.source_digest)


@dataclass(frozen=True)
class BandStats:
    count: int
    mean: float
    stddev: float


@dataclass(frozen=True)
class FrequencySummary:
    """Finalized view: per-channel band statistics plus provenance."""

    channels: dict
    total_blocks: int
    source_digest: str = None

    def deltas(self, channel="y"):
        """The 64 per-band standard deviations in natural order."""
        return np.array([b.stddev for b in self.channels[channel]])

    def ranked_bands(self, channel="y"):
        """Natural band indices by descending spread (zig-zag tie-break)."""
        return rank_bands(self.deltas(channel))

    def __eq__(self, other):
        if not isinstance(other, FrequencySummary):
            return NotImplemented
        return (
            self.total_blocks == other.total_blocks
            and self.source_digest == other.source_digest
            and self.channels == other.channels
        )


def save_stats(summary, path):
    """Persist a summary as JSON (floats keep full 17-significant-digit
    fidelity, so load(save(x)) == x field for field)."""
    doc = {
        "schema_version": STATS_SCHEMA_VERSION,
        "channels": {
            channel: {
                str(band): {"count": b.count, "mean": b.mean, "stddev": b.stddev}
                for band, b in enumerate(bands)
            }
            for channel, bands in summary.channels.items()
        },
        "total_blocks": summary.total_blocks,
        "source_manifest_digest": summary.source_digest,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_stats(path):
    with open(path) as fh:
        doc = json.load(fh)
    version = doc.get("schema_version")
    if version != STATS_SCHEMA_VERSION:
        raise SchemaVersionError(
            f"stats schema version {version!r} is not {STATS_SCHEMA_VERSION}"
        )
    channels = {}
    for channel, bands in doc["channels"].items():
        if sorted(int(k) for k in bands) != list(range(N_BANDS)):
            raise InvalidInputError(f"channel {channel!r} does not cover bands 0..63")
        channels[channel] = tuple(
            BandStats(
                int(bands[str(i)]["count"]),
                float(bands[str(i)]["mean"]),
                float(bands[str(i)]["stddev"]),
            )
            for i in range(N_BANDS)
        )
    return FrequencySummary(
        channels, int(doc["total_blocks"]), doc.get("source_manifest_digest")
    )


def save_delta_csv(summary, path, channel="y"):
    """Write the 64 per-band deviations (natural order) as band,stddev rows."""
    deltas = summary.deltas(channel)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["band", "stddev"])
        for band in range(N_BANDS):
            writer.writerow([band, repr(float(deltas[band]))])
