"""Deterministic, labeled random streams.

Reproducibility contract
------------------------
Every random quantity in this package is drawn from an :class:`RngStream`
obtained via :func:`substream`. The construction is fixed and documented so
that results are bit-reproducible across platforms:

* Generator: numpy's Philox 4x64 (10 rounds), a counter-based generator,
  keyed (not seeded) directly. The 128-bit key is the first 16 bytes of
  ``SHA-256(seed as 8 little-endian bytes || 0x1F || label as UTF-8)``,
  interpreted as two little-endian unsigned 64-bit words.
* Uniform doubles come from ``Generator.random()`` (53-bit mantissa fill,
  stable across numpy versions).
* Gaussians are produced by an explicit Box-Muller transform on those
  uniforms (see :meth:`RngStream.gaussians`) rather than numpy's ziggurat,
  so the uniform->normal mapping is pinned by this module, not by numpy
  internals.
* Permutations sort one uniform per element (argsort, stable ties).
* Bounded integers use the floor method ``floor(u * n)``; the modulo bias is
  below n/2^53, negligible for every n used here.

Streams with distinct labels are derived from cryptographically separated
keys and are treated as independent. A stream is stateful and must not be
shared by two concurrent consumers; derive one substream per task instead.
"""

from __future__ import annotations

import hashlib

import numpy as np


class RngStream:
    """A labeled, deterministic random stream (see module docstring)."""

    def __init__(self, seed: int, label: str):
        if not 0 <= int(seed) < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
        if not label:
            raise ValueError("stream label must be a nonempty string")
        self.label = label
        digest = hashlib.sha256(
            int(seed).to_bytes(8, "little") + b"\x1f" + label.encode("utf-8")
        ).digest()
        key = np.frombuffer(digest[:16], dtype="<u8")
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def uniforms(self, n: int) -> np.ndarray:
        """n i.i.d. uniform doubles in [0, 1)."""
        n = int(n)
        if n < 0:
            raise ValueError(f"draw count must be nonnegative, got {n}")
        return self._gen.random(n)

    def gaussians(self, n: int) -> np.ndarray:
        """n i.i.d. standard normals via Box-Muller.

        Consumes ceil(n/2) pairs of uniforms (u1, u2) and forms
        r = sqrt(-2 ln(1 - u1)), z = (r cos(2 pi u2), r sin(2 pi u2)).
        Using 1 - u1 keeps the log argument in (0, 1].
        """
        n = int(n)
        if n < 0:
            raise ValueError(f"draw count must be nonnegative, got {n}")
        m = (n + 1) // 2
        u = self._gen.random((2, m))
        r = np.sqrt(-2.0 * np.log1p(-u[0]))
        theta = 2.0 * np.pi * u[1]
        z = np.empty(2 * m)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        return z[:n]

    def permutation(self, n: int) -> np.ndarray:
        """A uniform permutation of range(n), via argsort of n uniforms."""
        return np.argsort(self.uniforms(int(n)), kind="stable")

    def integers(self, n: int, size: int) -> np.ndarray:
        """``size`` i.i.d. integers uniform over {0, ..., n-1} (floor method)."""
        if n < 1:
            raise ValueError(f"need n >= 1, got {n}")
        return np.minimum((self.uniforms(int(size)) * n).astype(np.int64), n - 1)


def substream(seed: int, label: str) -> RngStream:
    """Derive the deterministic stream identified by (seed, label)."""
    return RngStream(seed, label)


def gaussian_matrix(stream: RngStream, rows: int, cols: int, sigma: float) -> np.ndarray:
    """rows x cols matrix of i.i.d. Normal(0, sigma^2) entries.

    Entries are drawn row-major from ``stream`` (so the same stream state and
    shape always yield the same matrix). ``sigma=0`` returns exact zeros.
    """
    rows, cols = int(rows), int(cols)
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix shape must be positive, got {rows}x{cols}")
    if not sigma >= 0:
        raise ValueError(f"sigma must be nonnegative, got {sigma!r}")
    z = stream.gaussians(rows * cols).reshape(rows, cols)
    if sigma == 0:
        return np.zeros((rows, cols))
    return sigma * z
