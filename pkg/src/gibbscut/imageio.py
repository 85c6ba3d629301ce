"""Image and volume ingestion, feature quantization, and graph construction.

Supported formats are deliberately few: PGM (P2/P5) read and write, PPM
(P3/P6) read-only with a fixed integer luminance reduction, and headerless
8-bit volumes with caller-supplied dimensions.  Roundtrips through read and
write are bit-exact.  Neighborhood graphs cover the standard 4/8 (2D) and
6/26 (3D) connectivities; complete graphs are gated behind a pixel cap
because their arc count grows quadratically.  Synthetic noise uses numpy's
seeded PCG64 generator so experiments reproduce byte-for-byte.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .core import EdgeSet, GibbsCutError, ValidationError, _as_weight


class FormatError(GibbsCutError):
    """Malformed or truncated image data."""


@dataclass(frozen=True)
class RasterImage:
    """A 2D image or 3D volume of integer samples in [0, max_value].

    Samples are stored row-major, depth-slice by depth-slice: the sample at
    (x, y, z) has index (z * height + y) * width + x.
    """

    width: int
    height: int
    max_value: int
    samples: tuple[int, ...]
    depth: int = 1

    def __post_init__(self):
        object.__setattr__(self, "width", int(self.width))
        object.__setattr__(self, "height", int(self.height))
        object.__setattr__(self, "depth", int(self.depth))
        object.__setattr__(self, "max_value", int(self.max_value))
        object.__setattr__(
            self, "samples", tuple(int(v) for v in self.samples)
        )
        if self.width < 1 or self.height < 1 or self.depth < 1:
            raise ValidationError("image dimensions must be at least 1")
        if self.max_value < 1:
            raise ValidationError("max_value must be at least 1")
        expected = self.width * self.height * self.depth
        if len(self.samples) != expected:
            raise ValidationError(
                f"{len(self.samples)} samples for "
                f"{self.width}x{self.height}x{self.depth} image"
            )
        for v in self.samples:
            if not 0 <= v <= self.max_value:
                raise ValidationError(
                    f"sample {v} outside [0, {self.max_value}]"
                )

    @property
    def pixel_count(self) -> int:
        return self.width * self.height * self.depth

    @property
    def dims(self) -> tuple[int, ...]:
        """(width, height) for 2D, (width, height, depth) for volumes."""
        if self.depth == 1:
            return (self.width, self.height)
        return (self.width, self.height, self.depth)


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """First `count` whitespace-separated tokens, skipping '#' comments.

    Returns the tokens and the offset just past the single whitespace byte
    that terminates the last one (where a binary payload begins).
    """
    tokens: list[bytes] = []
    pos = 0
    size = len(data)
    while len(tokens) < count:
        while pos < size and data[pos : pos + 1].isspace():
            pos += 1
        if pos < size and data[pos] == ord("#"):
            while pos < size and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < size and not data[pos : pos + 1].isspace():
            if data[pos] == ord("#"):
                break
            pos += 1
        if pos == start:
            raise FormatError("truncated header")
        tokens.append(data[start:pos])
    if pos >= size or not data[pos : pos + 1].isspace():
        raise FormatError("missing whitespace after header")
    return tokens, pos + 1


def _int_token(token: bytes, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"non-numeric {what}: {token!r}") from None


def _check_dims(width: int, height: int, max_value: int) -> None:
    if width < 1 or height < 1:
        raise FormatError(f"empty dimensions {width}x{height}")
    if not 1 <= max_value <= 65535:
        raise FormatError(f"max value {max_value} outside [1, 65535]")


def _ascii_samples(data: bytes, offset: int, what: str) -> list[int]:
    body = re.sub(rb"#[^\n\r]*", b"", data[offset:])
    return [_int_token(tok, what) for tok in body.split()]


def read_pgm(data: bytes) -> RasterImage:
    """Parse a P2 (ASCII) or P5 (binary) grayscale image.

    Comments are ignored, 16-bit binary samples are big-endian, and both
    truncated and trailing payload bytes are rejected.
    """
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise FormatError(f"not a PGM image (magic {magic!r})")
    tokens, payload_at = _header_tokens(data, 4)
    width = _int_token(tokens[1], "width")
    height = _int_token(tokens[2], "height")
    max_value = _int_token(tokens[3], "max value")
    _check_dims(width, height, max_value)
    count = width * height
    if magic == b"P2":
        samples = _ascii_samples(data, payload_at - 1, "sample")
        if len(samples) < count:
            raise FormatError(f"payload has {len(samples)} of {count} samples")
        if len(samples) > count:
            raise FormatError("trailing data after samples")
    else:
        step = 2 if max_value > 255 else 1
        payload = data[payload_at:]
        if len(payload) < count * step:
            raise FormatError(
                f"payload has {len(payload)} of {count * step} bytes"
            )
        if len(payload) > count * step:
            raise FormatError("trailing data after samples")
        if step == 1:
            samples = list(payload)
        else:
            samples = [
                (payload[2 * i] << 8) | payload[2 * i + 1] for i in range(count)
            ]
    for v in samples:
        if v > max_value:
            raise FormatError(f"sample {v} exceeds max value {max_value}")
    return RasterImage(
        width=width, height=height, max_value=max_value, samples=tuple(samples)
    )


def write_pgm(image: RasterImage) -> bytes:
    """Serialize as binary P5; 16-bit samples are big-endian."""
    if image.depth != 1:
        raise ValidationError("volumes cannot be written as PGM")
    if image.max_value > 65535:
        raise ValidationError("PGM max value is limited to 65535")
    header = f"P5\n{image.width} {image.height}\n{image.max_value}\n".encode()
    if image.max_value > 255:
        payload = b"".join(v.to_bytes(2, "big") for v in image.samples)
    else:
        payload = bytes(image.samples)
    return header + payload


_LUMA_WEIGHTS = (2126, 7152, 722)


def read_ppm(data: bytes) -> RasterImage:
    """Parse a P3/P6 color image, reduced to integer luminance.

    Each pixel becomes (2126 R + 7152 G + 722 B) // 10000, which stays
    within [0, max_value]; color is not preserved.
    """
    magic = data[:2]
    if magic not in (b"P3", b"P6"):
        raise FormatError(f"not a PPM image (magic {magic!r})")
    tokens, payload_at = _header_tokens(data, 4)
    width = _int_token(tokens[1], "width")
    height = _int_token(tokens[2], "height")
    max_value = _int_token(tokens[3], "max value")
    _check_dims(width, height, max_value)
    count = width * height * 3
    if magic == b"P3":
        values = _ascii_samples(data, payload_at - 1, "sample")
        if len(values) != count:
            raise FormatError(f"payload has {len(values)} of {count} samples")
    else:
        step = 2 if max_value > 255 else 1
        payload = data[payload_at:]
        if len(payload) != count * step:
            raise FormatError(
                f"payload has {len(payload)} of {count * step} bytes"
            )
        if step == 1:
            values = list(payload)
        else:
            values = [
                (payload[2 * i] << 8) | payload[2 * i + 1] for i in range(count)
            ]
    for v in values:
        if v > max_value:
            raise FormatError(f"sample {v} exceeds max value {max_value}")
    samples = tuple(
        sum(w * values[3 * p + c] for c, w in enumerate(_LUMA_WEIGHTS)) // 10000
        for p in range(width * height)
    )
    return RasterImage(
        width=width, height=height, max_value=max_value, samples=samples
    )


def read_raw_volume(data: bytes, width: int, height: int, depth: int) -> RasterImage:
    """Wrap headerless 8-bit volume data with caller-supplied dimensions."""
    if width < 1 or height < 1 or depth < 1:
        raise FormatError(f"empty dimensions {width}x{height}x{depth}")
    expected = width * height * depth
    if len(data) != expected:
        raise FormatError(f"{len(data)} bytes for {expected} samples")
    return RasterImage(
        width=width,
        height=height,
        depth=depth,
        max_value=255,
        samples=tuple(data),
    )


def write_raw_volume(image: RasterImage) -> bytes:
    """Serialize samples as raw 8-bit bytes in storage order."""
    if image.max_value > 255:
        raise ValidationError("raw volumes are 8-bit; max_value must be <= 255")
    return bytes(image.samples)


def quantize(image: RasterImage, feature_max: int) -> tuple[int, ...]:
    """Map samples into features 0..feature_max by floor(s * F / max_value).

    Monotone in the sample value; 0 maps to 0 and max_value to feature_max.
    """
    if feature_max < 1:
        raise ValidationError("feature range must be at least 1")
    return tuple(
        (s * feature_max) // image.max_value for s in image.samples
    )


_OFFSETS = {
    4: ((1, 0, 0), (0, 1, 0)),
    8: ((1, 0, 0), (0, 1, 0), (1, 1, 0), (1, -1, 0)),
    6: ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    26: tuple(
        (dx, dy, dz)
        for dz in (0, 1)
        for dy in (-1, 0, 1)
        for dx in (-1, 0, 1)
        if (dz, dy, dx) > (0, 0, 0)
    ),
}


def grid_neighbor_pairs(
    dims: tuple[int, ...], connectivity: int
) -> list[tuple[int, int]]:
    """Unordered neighbor pairs (i, j), i < j, for a grid of the given dims.

    dims is (width, height) or (width, height, depth); connectivity is 4 or
    8 for single-slice grids and 6 or 26 for volumes.  Indices follow
    RasterImage storage order.
    """
    if len(dims) == 2:
        width, height = (int(v) for v in dims)
        depth = 1
    elif len(dims) == 3:
        width, height, depth = (int(v) for v in dims)
    else:
        raise ValidationError(f"dims must have 2 or 3 entries, got {len(dims)}")
    if width < 1 or height < 1 or depth < 1:
        raise ValidationError("grid dimensions must be at least 1")
    if connectivity not in _OFFSETS:
        raise ValidationError(f"connectivity must be 4, 8, 6, or 26, got {connectivity}")
    if connectivity in (4, 8) and depth > 1:
        raise ValidationError(
            f"{connectivity}-connectivity applies to single-slice grids only"
        )
    offsets = _OFFSETS[connectivity]
    pairs: list[tuple[int, int]] = []
    for z in range(depth):
        for y in range(height):
            base = (z * height + y) * width
            for x in range(width):
                for dx, dy, dz in offsets:
                    nx, ny, nz = x + dx, y + dy, z + dz
                    if 0 <= nx < width and 0 <= ny < height and 0 <= nz < depth:
                        other = (nz * height + ny) * width + nx
                        pairs.append((base + x, other))
    return sorted(tuple(sorted(p)) for p in pairs)


def grid_edges(dims: tuple[int, ...], connectivity: int, beta) -> EdgeSet:
    """Uniform-coupling grid: both directed arcs per neighbor pair."""
    weight = _as_weight(beta)
    if weight < 0:
        raise ValidationError("coupling must be nonnegative")
    arcs = []
    for i, j in grid_neighbor_pairs(dims, connectivity):
        arcs.append((i, j, weight))
        arcs.append((j, i, weight))
    return EdgeSet(tuple(arcs))


def complete_edges(n: int, beta, *, pixel_cap: int = 64) -> EdgeSet:
    """Fully connected instance, gated: the arc count is quadratic in n.

    Raises unless n <= pixel_cap; pass a larger cap explicitly to accept
    the cost.
    """
    if n < 1:
        raise ValidationError("need at least one pixel")
    if n > pixel_cap:
        raise ValidationError(
            f"complete graph over {n} pixels exceeds the cap {pixel_cap}; "
            "raise pixel_cap to allow it"
        )
    weight = _as_weight(beta)
    if weight < 0:
        raise ValidationError("coupling must be nonnegative")
    arcs = tuple(
        (i, j, weight) for i in range(n) for j in range(n) if i != j
    )
    return EdgeSet(arcs)


def add_gaussian_noise(image: RasterImage, sigma, seed: int) -> RasterImage:
    """Independent Gaussian perturbation, rounded and clamped.

    Deterministic for a fixed seed: the generator is numpy's default_rng
    (PCG64).  sigma = 0 returns an identical image.
    """
    if not isinstance(sigma, Real) or float(sigma) < 0:
        raise ValidationError(f"sigma must be a nonnegative number, got {sigma!r}")
    rng = np.random.default_rng(int(seed))
    noise = rng.normal(0.0, float(sigma), size=image.pixel_count)
    values = np.clip(
        np.rint(np.asarray(image.samples, dtype=np.float64) + noise),
        0,
        image.max_value,
    ).astype(np.int64)
    return RasterImage(
        width=image.width,
        height=image.height,
        depth=image.depth,
        max_value=image.max_value,
        samples=tuple(int(v) for v in values),
    )


def synthetic_disk(
    width: int, height: int, *, max_value: int = 255, inside: int = 200, outside: int = 60
) -> RasterImage:
    """Two-region test pattern: a centered disk of radius min(w, h)/3.

    Exact integer geometry, so the pattern is identical across platforms;
    benchmarks and examples add seeded noise on top.
    """
    if not (0 <= outside <= max_value and 0 <= inside <= max_value):
        raise ValidationError("region values must lie in [0, max_value]")
    side = min(width, height)
    samples = []
    for y in range(height):
        for x in range(width):
            dx = 2 * x - (width - 1)
            dy = 2 * y - (height - 1)
            samples.append(
                inside if 9 * (dx * dx + dy * dy) <= 4 * side * side else outside
            )
    return RasterImage(
        width=width, height=height, max_value=max_value, samples=tuple(samples)
    )
