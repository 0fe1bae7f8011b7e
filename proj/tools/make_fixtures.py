#!/usr/bin/env python3
"""Regenerates the PNM fixture corpus under tests/data/images.

The images are scikit-image's bundled sample photographs, block-averaged
where needed so every fixture stays at or below 512x512.
"""
import pathlib
import sys

import numpy as np
from skimage import data

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "data" / "images"


def half(img):
    h, w = img.shape[0] // 2 * 2, img.shape[1] // 2 * 2
    img = img[:h, :w].astype(np.float64)
    out = (img[0::2, 0::2] + img[0::2, 1::2] + img[1::2, 0::2] + img[1::2, 1::2]) / 4.0
    return np.clip(np.round(out), 0, 255).astype(np.uint8)


def save(name, img):
    img = np.ascontiguousarray(img, dtype=np.uint8)
    magic = b"P5" if img.ndim == 2 else b"P6"
    header = magic + b"\n%d %d\n255\n" % (img.shape[1], img.shape[0])
    (OUT / name).write_bytes(header + img.tobytes())


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    save("camera.pgm", half(data.camera()))
    save("coins.pgm", data.coins())
    save("moon.pgm", half(data.moon()))
    save("astronaut.ppm", half(data.astronaut()))
    save("chelsea.ppm", half(data.chelsea()))
    save("coffee.ppm", half(data.coffee()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
