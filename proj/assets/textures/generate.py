#!/usr/bin/env python3
"""Regenerates the bundled texture corpus. Every image is periodic (built from
FFT-filtered white noise and integer-frequency waves), so the circular
statistics the library computes are exact for them."""

import numpy as np
from PIL import Image

OUT = {}


def save(name, arr):
    arr = np.clip(arr, 0.0, 1.0)
    OUT[name] = Image.fromarray((arr * 255.0 + 0.5).astype(np.uint8), "RGB")


def filtered_noise(rng, n, keep, power=2.0):
    """Periodic noise with a radial low-pass |w|^-power envelope, cut at `keep`
    (fraction of Nyquist)."""
    white = rng.standard_normal((n, n))
    spec = np.fft.fft2(white)
    fy = np.fft.fftfreq(n)[:, None]
    fx = np.fft.fftfreq(n)[None, :]
    radius = np.hypot(fy, fx)
    envelope = np.where(radius <= keep * 0.5, 1.0 / (1.0 + (radius * n) ** power), 0.0)
    out = np.real(np.fft.ifft2(spec * envelope))
    out -= out.min()
    peak = out.max()
    return out / peak if peak > 0 else out


def colorize(gray, lo, hi):
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    return lo + gray[..., None] * (hi - lo)


def weave(n=64, seed=101):
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:n, 0:n] / n
    warp = 0.06 * filtered_noise(rng, n, 0.5, 1.0)
    woof = 0.5 + 0.5 * np.sin(2 * np.pi * (8 * x + warp))
    warp2 = 0.06 * filtered_noise(rng, n, 0.5, 1.0)
    weft = 0.5 + 0.5 * np.sin(2 * np.pi * (8 * y + warp2))
    gray = np.maximum(woof, weft) * 0.8 + 0.2 * filtered_noise(rng, n, 1.0, 0.5)
    return colorize(gray, (0.35, 0.22, 0.10), (0.85, 0.70, 0.45))


def dots(n=64, seed=102):
    rng = np.random.default_rng(seed)
    field = filtered_noise(rng, n, 0.35, 2.5)
    blobs = 1.0 / (1.0 + np.exp(-24 * (field - 0.62)))
    speck = filtered_noise(rng, n, 1.0, 0.5)
    gray = 0.75 * blobs + 0.25 * speck
    return colorize(gray, (0.10, 0.30, 0.33), (0.88, 0.78, 0.42))


def stripes(n=64, seed=103):
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:n, 0:n] / n
    jitter = 0.10 * filtered_noise(rng, n, 0.4, 1.5)
    wave = 0.5 + 0.5 * np.sin(2 * np.pi * (6 * (x + y) + jitter))
    gray = wave * 0.85 + 0.15 * filtered_noise(rng, n, 1.0, 0.5)
    return colorize(gray, (0.30, 0.06, 0.08), (0.92, 0.60, 0.40))


def marble(n=64, seed=104):
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:n, 0:n] / n
    vein = np.sin(2 * np.pi * (3 * x + 2.2 * filtered_noise(rng, n, 0.3, 2.0)))
    gray = 0.55 + 0.35 * vein + 0.10 * filtered_noise(rng, n, 1.0, 0.8)
    return colorize(gray, (0.25, 0.28, 0.38), (0.92, 0.93, 0.96))


def granite(n=64, seed=105):
    rng = np.random.default_rng(seed)
    gray = 0.55 * filtered_noise(rng, n, 1.0, 1.2) + 0.45 * filtered_noise(rng, n, 0.5, 2.0)
    tint = filtered_noise(rng, n, 0.25, 2.0)
    img = colorize(gray, (0.15, 0.15, 0.17), (0.80, 0.78, 0.76))
    img[..., 0] += 0.06 * tint
    return img


def rust(n=64, seed=106):
    rng = np.random.default_rng(seed)
    blotch = filtered_noise(rng, n, 0.2, 2.5)
    speck = filtered_noise(rng, n, 1.0, 0.6)
    gray = 0.65 * blotch + 0.35 * speck
    return colorize(gray, (0.28, 0.10, 0.05), (0.85, 0.48, 0.20))


def micro(n=128, seed=107):
    rng = np.random.default_rng(seed)
    r = 0.6 * filtered_noise(rng, n, 0.9, 1.0) + 0.4 * filtered_noise(rng, n, 0.4, 1.8)
    g = 0.6 * filtered_noise(rng, n, 0.9, 1.0) + 0.4 * r
    b = 0.7 * filtered_noise(rng, n, 0.9, 1.0) + 0.3 * g
    img = np.stack([0.30 + 0.55 * r, 0.25 + 0.50 * g, 0.20 + 0.45 * b], axis=-1)
    return img


def content(n=64, seed=108):
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:n, 0:n] / n
    img = np.zeros((n, n, 3))
    img[..., 0] = 0.25 + 0.5 * x
    img[..., 1] = 0.25 + 0.5 * y
    img[..., 2] = 0.45
    cy, cx = 0.38, 0.42
    disc = ((y - cy) ** 2 + (x - cx) ** 2) < 0.04
    img[disc] = (0.9, 0.85, 0.3)
    bar = (np.abs(x - 0.72) < 0.06) & (np.abs(y - 0.55) < 0.28)
    img[bar] = (0.15, 0.2, 0.55)
    img += 0.02 * filtered_noise(rng, n, 1.0, 0.5)[..., None]
    return img


def wood(n=256, seed=109):
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:n, 0:n] / n
    warp = 0.35 * filtered_noise(rng, n, 0.15, 2.0)
    rings = 0.5 + 0.5 * np.sin(2 * np.pi * (10 * x + warp))
    grain = filtered_noise(rng, n, 1.0, 0.7)
    gray = 0.75 * rings + 0.25 * grain
    return colorize(gray, (0.32, 0.18, 0.08), (0.80, 0.58, 0.32))


def main():
    save("weave_64.png", weave())
    save("dots_64.png", dots())
    save("stripes_64.png", stripes())
    save("marble_64.png", marble())
    save("granite_64.png", granite())
    save("rust_64.png", rust())
    save("micro_128.png", micro())
    save("content_64.png", content())
    save("wood_256.png", wood())
    import os

    here = os.path.dirname(os.path.abspath(__file__))
    for name, image in OUT.items():
        image.save(os.path.join(here, name))
        print("wrote", name, image.size)


if __name__ == "__main__":
    main()
