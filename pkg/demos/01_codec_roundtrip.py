"""Walk one image through the codec: encode, inspect markers, decode, measure.

Run:  python demos/01_codec_roundtrip.py
"""

import numpy as np

from statjpeg import RasterImage, decode_image, encode_image, psnr, standard_table
from statjpeg.jfif import list_markers, validate_structure
from statjpeg.synth import synth_image

rng = np.random.default_rng(7)
img = synth_image("stripes", rng, 96, 96)
print(f"input: {img.width}x{img.height}, {img.channels} channels")

# --- encode at a few quality factors -------------------------------------
for qf in (100, 75, 30):
    data = encode_image(img, standard_table(qf, "luma"), standard_table(qf, "chroma"))
    decoded = decode_image(data)
    quality = psnr(img, decoded)
    label = "lossless" if quality.lossless else f"{quality.psnr:5.2f} dB"
    print(f"QF {qf:3d}: {len(data):6d} bytes   luma PSNR {label}")

# --- look inside the file --------------------------------------------------
data = encode_image(img, standard_table(75, "luma"), standard_table(75, "chroma"))
print("\nmarker layout:")
for name, offset in list_markers(data):
    print(f"  {offset:6d}  {name}")
print("structure problems:", validate_structure(data) or "none")

# --- bytes are self-describing ---------------------------------------------
# decoding needs nothing but the bytes; tables travel in DQT segments
reloaded = decode_image(bytes(data))
print("\nre-decode from raw bytes matches:", reloaded == decode_image(data))

# --- the identity-ish setting ----------------------------------------------
from statjpeg import QuantTable

ones = QuantTable(np.ones(64))
gray = RasterImage.from_array(rng.integers(0, 256, size=(64, 64)).astype(np.uint8))
out = decode_image(encode_image(gray, ones))
err = np.abs(out.planes[0].astype(int) - gray.planes[0].astype(int)).max()
print(f"all-1 tables on random grayscale: max pixel error {err} (bound 2)")
