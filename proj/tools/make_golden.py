#!/usr/bin/env python3
"""Regenerate the golden .ahc fixtures from crops of the test images.

Usage: make_golden.py <path to the ahc executable>

Only rerun this after an intentional format change; the unit and acceptance
tests compare encoder and decoder output against these files byte for byte.
"""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
IMAGES = ROOT / "tests" / "data" / "images"
GOLDEN = ROOT / "tests" / "data" / "golden"

# name, source image, crop (top, left, height, width), levels, quant, basis
CASES = [
    ("camera_block", "camera.pgm", (100, 90, 20, 24), 2, 64, "adaptive-block"),
    ("astronaut_global", "astronaut.ppm", (40, 120, 11, 13), 3, 16, "adaptive-global"),
    ("camera_set3", "camera.pgm", (30, 30, 9, 16), 1, 8, "set3"),
    ("coins_set2", "coins.pgm", (0, 0, 17, 6), 2, 256, "set2"),
    ("tiny", "moon.pgm", (128, 128, 2, 2), 1, 2, "set1"),
]


def read_pnm(path):
    data = path.read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        start = pos
        while not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    channels = 3 if fields[0] == b"P6" else 1
    width, height = int(fields[1]), int(fields[2])
    return width, height, channels, data[pos + 1 :]


def write_crop(src, crop, dest):
    width, _, channels, raster = read_pnm(src)
    top, left, h, w = crop
    rows = []
    for r in range(top, top + h):
        start = (r * width + left) * channels
        rows.append(raster[start : start + w * channels])
    magic = b"P6" if channels == 3 else b"P5"
    dest.write_bytes(magic + b"\n%d %d\n255\n" % (w, h) + b"".join(rows))
    return channels


def main():
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    tool = sys.argv[1]
    GOLDEN.mkdir(parents=True, exist_ok=True)
    lines = ["# name input levels quant basis"]
    for name, image, crop, levels, quant, basis in CASES:
        src = GOLDEN / f"{name}.input.{image.rsplit('.', 1)[1]}"
        channels = write_crop(IMAGES / image, crop, src)
        ahc = GOLDEN / f"{name}.ahc"
        decoded = GOLDEN / f"{name}.decoded.{'ppm' if channels == 3 else 'pgm'}"
        subprocess.run([tool, "encode", "-i", str(src), "-o", str(ahc), "--levels", str(levels),
                        "--quant", str(quant), "--basis", basis], check=True, stdout=subprocess.DEVNULL)
        subprocess.run([tool, "decode", str(ahc), "-o", str(decoded)], check=True, stdout=subprocess.DEVNULL)
        lines.append(f"{name} {src.name} {levels} {quant} {basis}")
    (GOLDEN / "cases.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
