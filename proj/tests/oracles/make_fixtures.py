#!/usr/bin/env python3
"""Regenerates tests/data fixtures and prints the oracle values the C++ tests freeze.

Independent of the C++ implementation: pixel ratios, lattice counts, haversine
distances and quartiles are computed here with plain Python / numpy.
"""
import math
import pathlib

import numpy as np
from PIL import Image

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"
DATA.mkdir(exist_ok=True)


def save_png(name, arr):
    Image.fromarray(np.asarray(arr, dtype=np.uint8), "RGB").save(DATA / name)


def rgb_image(w, h, color):
    return np.tile(np.array(color, dtype=np.uint8), (h, w, 1))


# ---- sky images -------------------------------------------------------------
save_png("all_blue_4x4.png", rgb_image(4, 4, (0, 0, 255)))
save_png("all_white_4x4.png", rgb_image(4, 4, (255, 255, 255)))
half = rgb_image(8, 4, (60, 120, 255))
half[:, :4] = (255, 255, 255)
save_png("half_white_half_blue_8x4.png", half)
Image.fromarray(rgb_image(16, 16, (255, 255, 255)), "RGB").save(DATA / "all_white_16x16.jpg", quality=95)
# 16-bit RGB: high byte 200/200/100 with noisy low bytes
arr16 = np.zeros((2, 3, 3), dtype=">u2")
arr16[..., 0] = 200 * 256 + 255
arr16[..., 1] = 200 * 256 + 17
arr16[..., 2] = 100 * 256 + 128
import zlib, struct


def png_chunk(tag, data):
    return struct.pack(">I", len(data)) + tag + data + struct.pack(">I", zlib.crc32(tag + data) & 0xFFFFFFFF)


raw = b"".join(b"\x00" + arr16[r].tobytes() for r in range(arr16.shape[0]))
png16 = (b"\x89PNG\r\n\x1a\n" + png_chunk(b"IHDR", struct.pack(">IIBBBBB", 3, 2, 16, 2, 0, 0, 0))
         + png_chunk(b"IDAT", zlib.compress(raw)) + png_chunk(b"IEND", b""))
(DATA / "rgb16_3x2.png").write_bytes(png16)
(DATA / "empty.png").write_bytes(b"")

threshold = 0.9
labels = [["cloud" if r / b >= threshold else "sky" for (r, g, b) in row] for row in half.tolist()]
n_cloud = sum(l == "cloud" for row in labels for l in row)
n_sky = sum(l == "sky" for row in labels for l in row)
print("half/half labels left column:", labels[0][0], "right column:", labels[0][-1])
print("half/half coverage:", 100.0 * n_cloud / (n_cloud + n_sky))
print("16-bit truncated RGB:", [v >> 8 for v in arr16[0, 0].tolist()], "ratio", (200 / 100))

# ---- ROI lattice count ------------------------------------------------------
count = sum(1 for x in range(100) for y in range(100) if (x - 50) ** 2 + (y - 50) ** 2 < 10 ** 2)
print("ROI lattice count centre (50,50) r=10 in 100x100:", count)

# ---- mask normalization ------------------------------------------------------
norm = {c: (192 - c) * 100 / 192 for c in (0, 64, 128, 192)}
print("normalized:", norm)
window = [norm[c] for c in (0, 64, 128, 192, 192, 192)]
print("neighbourhood mean with 3 invalid:", repr(sum(window) / len(window)))


# ---- haversine nearest pixel --------------------------------------------------
def hav(lat1, lon1, lat2, lon2, R=6371.0088):
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dl, dn = p2 - p1, math.radians(lon2 - lon1)
    h = math.sin(dl / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dn / 2) ** 2
    return 2 * R * math.asin(math.sqrt(h))


centres = {(0, 0): (1.36, 103.67), (0, 1): (1.36, 103.69), (1, 0): (1.34, 103.67), (1, 1): (1.34, 103.69)}
q = (1.355, 103.686)
d = {k: hav(*q, *v) for k, v in centres.items()}
print("2x2 distances:", d, "argmin:", min(d, key=d.get))

# ---- quartiles ----------------------------------------------------------------
print("inclusive quartiles [1,2,3,4]:", np.percentile([1, 2, 3, 4], [0, 25, 50, 75, 100], method="linear"))
print("assign 33.333 to level edges:", [e for e in (100 / 6, 50.0, 500 / 6)], 100 / 6 <= 33.333 < 50)


# ---- CMG1 fixtures --------------------------------------------------------------
def cmg(time, codes, lat, lon):
    rows, cols = len(codes), len(codes[0])
    out = ["CMG1", f"time {time}", f"dims {rows} {cols}", "section codes"]
    out += [" ".join(str(c) for c in row) for row in codes]
    out.append("section lat")
    out += [" ".join(f"{v:.6f}" for v in row) for row in lat]
    out.append("section lon")
    out += [" ".join(f"{v:.6f}" for v in row) for row in lon]
    return "\n".join(out) + "\n"


def geo(rows, cols, lat0=1.3483, lon0=103.6831, step=0.009):
    hr, hc = rows // 2, cols // 2
    lat = [[round(lat0 + (hr - r) * step, 6) for c in range(cols)] for r in range(rows)]
    lon = [[round(lon0 + (c - hc) * step, 6) for c in range(cols)] for r in range(rows)]
    return lat, lon


def write(name, text):
    (DATA / name).write_text(text)


write("single_192.cmg", cmg("2015-12-25T04:00:00Z", [[192]], [[1.3483]], [[103.6831]]))
write("uniform_code0.cmg", cmg("2015-12-25T07:00:00Z", [[0] * 3] * 3, *geo(3, 3)))
write("three_invalid.cmg", cmg("2015-12-25T04:00:00Z", [[0, 64, 128], [192, 192, 192], [-1, -1, -1]], *geo(3, 3)))
write("all_invalid.cmg", cmg("2015-12-25T04:00:00Z", [[-1] * 3] * 3, *geo(3, 3)))
write("has_255.cmg", cmg("2015-12-25T04:00:00Z", [[0, 255], [64, 128]], *geo(2, 2)))
write("legend_2x2.cmg", cmg("2015-12-25T04:00:00Z", [[192, 128], [64, 0]], *geo(2, 2)))
trunc = cmg("2015-12-25T04:00:00Z", [[0, 0, 0], [0, 0, 0], [0, 0, 0]], *geo(3, 3)).split("\n")
trunc[6] = "0 0"
write("truncated.cmg", "\n".join(trunc))

rng = np.random.default_rng(20151225)
canon = DATA / "canonical"
canon.mkdir(exist_ok=True)
for i in range(10):
    rows, cols = int(rng.integers(1, 8)), int(rng.integers(1, 8))
    codes = rng.choice([-1, 0, 64, 128, 192], size=(rows, cols)).tolist()
    lat0 = float(rng.uniform(-89, 89))
    lon0 = float(rng.uniform(-179, 179))
    lat = [[round(lat0 + rng.uniform(-0.9, 0.9), 6) for _ in range(cols)] for _ in range(rows)]
    lon = [[round(lon0 + rng.uniform(-0.9, 0.9), 6) for _ in range(cols)] for _ in range(rows)]
    hh, mm = int(rng.integers(0, 24)), int(rng.integers(0, 60))
    write(f"canonical/grid_{i:02d}.cmg", cmg(f"2015-{i + 1:02d}-1{i % 10}T{hh:02d}:{mm:02d}:00Z", codes, lat, lon))
print("wrote fixtures to", DATA)
