"""Image parsing, serialization, grids, quantization, and synthetic inputs."""

import statistics

import pytest

from gibbscut import FormatError, RasterImage, ValidationError
from gibbscut.imageio import (
    add_gaussian_noise,
    complete_edges,
    grid_edges,
    grid_neighbor_pairs,
    quantize,
    read_pgm,
    read_ppm,
    read_raw_volume,
    synthetic_disk,
    write_pgm,
    write_raw_volume,
)


class TestRasterImage:
    def test_dims_and_count(self):
        image = RasterImage(3, 2, 255, tuple(range(6)))
        assert image.dims == (3, 2)
        assert image.pixel_count == 6
        volume = RasterImage(2, 2, 255, tuple(range(8)), depth=2)
        assert volume.dims == (2, 2, 2)

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValidationError):
            RasterImage(0, 2, 255, ())
        with pytest.raises(ValidationError):
            RasterImage(2, 2, 255, (0, 0, 0))
        with pytest.raises(ValidationError):
            RasterImage(1, 1, 0, (0,))

    def test_rejects_out_of_range_samples(self):
        with pytest.raises(ValidationError):
            RasterImage(1, 1, 10, (11,))
        with pytest.raises(ValidationError):
            RasterImage(1, 1, 10, (-1,))


class TestPgm:
    def test_binary_roundtrip(self):
        image = RasterImage(2, 2, 255, (0, 128, 255, 7))
        assert read_pgm(write_pgm(image)) == image

    def test_sixteen_bit_big_endian(self):
        image = RasterImage(2, 1, 65535, (0, 40000))
        data = write_pgm(image)
        assert data.endswith(b"\x00\x00\x9c\x40")
        assert read_pgm(data) == image

    def test_writer_is_canonical(self):
        data = b"P5\n# a comment\n2 1\n255\n\x05\x06"
        once = write_pgm(read_pgm(data))
        assert read_pgm(once) == read_pgm(data)
        assert write_pgm(read_pgm(once)) == once

    def test_ascii_with_comments_and_odd_whitespace(self):
        data = b"P2 # magic\n#full line\n 2\t3 # dims\n255\n0 1 2\n3 4 5 # tail\n"
        image = read_pgm(data)
        assert (image.width, image.height) == (2, 3)
        assert image.samples == (0, 1, 2, 3, 4, 5)

    def test_comment_between_header_and_payload(self):
        data = b"P5 1 1 #c\n255\n\x09"
        assert read_pgm(data).samples == (9,)

    def test_crlf_between_tokens(self):
        # exactly one whitespace byte separates max value from payload
        data = b"P5\r\n2 1\r\n255\n\x01\x02"
        assert read_pgm(data).samples == (1, 2)

    def test_payload_starts_after_one_whitespace_byte(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5 1 1 255 \n\x09")

    def test_single_pixel_and_unit_max(self):
        assert read_pgm(b"P5 1 1 1 \x01").samples == (1,)
        assert read_pgm(b"P2 1 1 1 0").samples == (0,)

    def test_rejects_empty_dimensions(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5 0 0 255 ")

    def test_rejects_bad_magic(self):
        with pytest.raises(FormatError):
            read_pgm(b"P7 1 1 255 \x00")

    def test_rejects_bad_max_value(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5 1 1 0 \x00")
        with pytest.raises(FormatError):
            read_pgm(b"P5 1 1 70000 \x00\x00")

    def test_rejects_truncated_payload(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5 2 2 255 \x00\x01\x02")
        with pytest.raises(FormatError):
            read_pgm(b"P2 2 1 255 9")

    def test_rejects_trailing_payload(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5 1 1 255 \x00\x01")
        with pytest.raises(FormatError):
            read_pgm(b"P2 1 1 255 0 1")

    def test_rejects_non_numeric_header(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5 one 1 255 \x00")

    def test_rejects_truncated_header(self):
        with pytest.raises(FormatError):
            read_pgm(b"P5 2 2")

    def test_rejects_sample_above_max(self):
        with pytest.raises(FormatError):
            read_pgm(b"P2 1 1 5 6")
        with pytest.raises(FormatError):
            read_pgm(b"P5 1 1 200 \xff")

    def test_writer_rejects_volumes(self):
        volume = RasterImage(1, 1, 255, (0, 0), depth=2)
        with pytest.raises(ValidationError):
            write_pgm(volume)


class TestPpm:
    def test_binary_luminance(self):
        data = b"P6 2 1 255 " + bytes((255, 0, 0, 255, 255, 255))
        image = read_ppm(data)
        assert image.samples == (54, 255)

    def test_ascii_luminance(self):
        data = b"P3 1 1 255  0 0 255"
        assert read_ppm(data).samples == (18,)

    def test_sixteen_bit(self):
        triple = (0).to_bytes(2, "big") + (65535).to_bytes(2, "big") + (0).to_bytes(2, "big")
        data = b"P6 1 1 65535 " + triple
        assert read_ppm(data).samples == (65535 * 7152 // 10000,)

    def test_rejects_wrong_magic(self):
        with pytest.raises(FormatError):
            read_ppm(b"P5 1 1 255 \x00")

    def test_rejects_short_payload(self):
        with pytest.raises(FormatError):
            read_ppm(b"P6 1 1 255 \x00\x00")


class TestRawVolume:
    def test_roundtrip(self):
        image = read_raw_volume(bytes(range(8)), 2, 2, 2)
        assert image.depth == 2
        assert write_raw_volume(image) == bytes(range(8))

    def test_rejects_size_mismatch(self):
        with pytest.raises(FormatError):
            read_raw_volume(bytes(7), 2, 2, 2)

    def test_rejects_empty_dims(self):
        with pytest.raises(FormatError):
            read_raw_volume(b"", 0, 1, 1)

    def test_writer_rejects_wide_samples(self):
        image = RasterImage(1, 1, 65535, (300,))
        with pytest.raises(ValidationError):
            write_raw_volume(image)


class TestQuantize:
    def test_endpoints_and_midpoint(self):
        image = RasterImage(3, 1, 255, (0, 128, 255))
        assert quantize(image, 3) == (0, 1, 3)

    def test_identity_when_ranges_match(self):
        image = RasterImage(4, 1, 3, (0, 1, 2, 3))
        assert quantize(image, 3) == (0, 1, 2, 3)

    def test_monotone(self):
        image = RasterImage(256, 1, 255, tuple(range(256)))
        values = quantize(image, 5)
        assert all(a <= b for a, b in zip(values, values[1:]))
        assert values[0] == 0 and values[-1] == 5

    def test_rejects_empty_range(self):
        image = RasterImage(1, 1, 255, (0,))
        with pytest.raises(ValidationError):
            quantize(image, 0)


class TestGrids:
    def test_four_connected_square(self):
        assert grid_neighbor_pairs((2, 2), 4) == [(0, 1), (0, 2), (1, 3), (2, 3)]

    def test_single_pixel_has_no_pairs(self):
        assert grid_neighbor_pairs((1, 1), 4) == []

    def test_eight_connected_count(self):
        assert len(grid_neighbor_pairs((3, 3), 8)) == 20

    def test_six_connected_volume(self):
        pairs = grid_neighbor_pairs((2, 2, 2), 6)
        assert len(pairs) == 12
        assert (0, 4) in pairs  # across the depth axis

    def test_twenty_six_connected_volume_is_complete_on_a_cube(self):
        pairs = grid_neighbor_pairs((2, 2, 2), 26)
        assert len(pairs) == 28

    def test_single_slice_volume_matches_plane(self):
        assert grid_neighbor_pairs((3, 2, 1), 6) == grid_neighbor_pairs((3, 2), 4)

    def test_planar_connectivity_rejected_for_volumes(self):
        with pytest.raises(ValidationError):
            grid_neighbor_pairs((2, 2, 2), 4)

    def test_unknown_connectivity_rejected(self):
        with pytest.raises(ValidationError):
            grid_neighbor_pairs((2, 2), 5)

    def test_grid_edges_are_symmetric(self):
        edges = grid_edges((2, 2), 4, 2)
        assert len(edges.arcs) == 8
        pairs = edges.symmetric_pairs()
        assert all(w == 4 for w in pairs.values())

    def test_complete_edges(self):
        edges = complete_edges(3, 1)
        assert len(edges.arcs) == 6

    def test_complete_edges_cap(self):
        with pytest.raises(ValidationError):
            complete_edges(65, 1)
        assert len(complete_edges(65, 1, pixel_cap=65).arcs) == 65 * 64


class TestNoise:
    def test_zero_sigma_is_identity(self):
        image = synthetic_disk(8, 8)
        assert add_gaussian_noise(image, 0, 1) == image

    def test_seed_determinism(self):
        image = synthetic_disk(16, 16)
        a = add_gaussian_noise(image, 20, 7)
        b = add_gaussian_noise(image, 20, 7)
        c = add_gaussian_noise(image, 20, 8)
        assert a == b
        assert a != c

    def test_rejects_negative_sigma(self):
        with pytest.raises(ValidationError):
            add_gaussian_noise(synthetic_disk(4, 4), -1, 1)

    def test_empirical_spread_matches_sigma(self):
        flat = RasterImage(100, 100, 255, (128,) * 10000)
        noisy = add_gaussian_noise(flat, 30, 1729)
        deviations = [s - 128 for s in noisy.samples]
        spread = statistics.pstdev(deviations)
        assert abs(statistics.fmean(deviations)) < 1.5
        assert 27.0 <= spread <= 33.0

    def test_clamped_to_range(self):
        dark = RasterImage(50, 50, 255, (0,) * 2500)
        noisy = add_gaussian_noise(dark, 80, 3)
        assert min(noisy.samples) >= 0
        assert max(noisy.samples) <= 255


class TestSyntheticDisk:
    def test_two_values_and_center(self):
        image = synthetic_disk(32, 32)
        assert set(image.samples) == {60, 200}
        center = image.samples[16 * 32 + 16]
        assert center == 200
        assert image.samples[0] == 60

    def test_deterministic(self):
        assert synthetic_disk(16, 12) == synthetic_disk(16, 12)

    def test_rejects_values_outside_range(self):
        with pytest.raises(ValidationError):
            synthetic_disk(8, 8, max_value=100, inside=150)
