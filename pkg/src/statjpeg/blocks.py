"""8x8 block partitioning with edge-replication padding and level shift."""

import numpy as np

from .dct import BLOCK_SIZE
from .errors import InvalidInputError


def block_grid(width, height):
    """Number of (rows, cols) of 8x8 blocks covering a width x height plane."""
    return -(-height // BLOCK_SIZE), -(-width // BLOCK_SIZE)


def partition_blocks(plane, width=None, height=None):
    """Split a plane into level-shifted 8x8 blocks in raster order.

    Right and bottom edges are padded by replicating the last column/row.
    Returns an (n_blocks, 8, 8) float64 array of samples shifted by -128.
    """
    plane = np.asarray(plane)
    if plane.size == 0:
        raise InvalidInputError("cannot partition an empty plane")
    if width is None:
        height, width = plane.shape
    elif plane.shape != (height, width):
        raise InvalidInputError(
            f"plane shape {plane.shape} does not match {height}x{width}"
        )
    rows, cols = block_grid(width, height)
    pad_h = rows * BLOCK_SIZE - height
    pad_w = cols * BLOCK_SIZE - width
    padded = np.pad(plane.astype(np.float64), ((0, pad_h), (0, pad_w)), mode="edge")
    blocks = (
        padded.reshape(rows, BLOCK_SIZE, cols, BLOCK_SIZE)
        .transpose(0, 2, 1, 3)
        .reshape(rows * cols, BLOCK_SIZE, BLOCK_SIZE)
    )
    return blocks - 128.0


def assemble_plane(pixel_blocks, width, height):
    """Inverse of :func:`partition_blocks` for decoded sample blocks.

    Takes real-valued (n_blocks, 8, 8) blocks (inverse-DCT output), rounds to
    the nearest integer, clamps to [-128, 127], un-shifts by +128, and crops
    the replication padding back to width x height.
    """
    rows, cols = block_grid(width, height)
    blocks = np.asarray(pixel_blocks, dtype=np.float64)
    if blocks.shape != (rows * cols, BLOCK_SIZE, BLOCK_SIZE):
        raise InvalidInputError(
            f"expected {rows * cols} blocks for a {width}x{height} plane, "
            f"got shape {blocks.shape}"
        )
    rounded = np.sign(blocks) * np.floor(np.abs(blocks) + 0.5)
    shifted = np.clip(rounded, -128, 127) + 128
    padded = (
        shifted.reshape(rows, cols, BLOCK_SIZE, BLOCK_SIZE)
        .transpose(0, 2, 1, 3)
        .reshape(rows * BLOCK_SIZE, cols * BLOCK_SIZE)
    )
    return padded[:height, :width].astype(np.uint8)
