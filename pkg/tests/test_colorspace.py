import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tintforge.colorspace import (
    DeltaEParams,
    HsvColor,
    LabColor,
    SrgbColor,
    ciede2000,
    convert,
    format_hex,
    hue_distance_degrees,
    lab_to_srgb,
    pairwise_distance_matrix,
    parse_hex,
    space_distance,
    srgb_to_lab,
)
from tintforge.errors import InputError

lab_colors = st.builds(
    LabColor,
    st.floats(0, 100),
    st.floats(-128, 128),
    st.floats(-128, 128),
)


class TestHexParsing:
    def test_optional_hash_and_case(self):
        assert parse_hex("FF6F61") == parse_hex("#ff6f61")

    def test_values(self):
        c = parse_hex("#ff0080")
        assert (c.r, c.g, c.b) == (1.0, 0.0, 128 / 255)

    @pytest.mark.parametrize("bad", ["", "#ff", "ff6f6", "ggheii", "#1234567"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(InputError):
            parse_hex(bad)

    def test_format_roundtrip(self):
        assert format_hex(parse_hex("#A1b2C3")) == "#a1b2c3"


class TestSrgbLab:
    def test_white_point(self):
        lab = srgb_to_lab(SrgbColor(1, 1, 1))
        assert lab.L == pytest.approx(100.0, abs=1e-9)
        assert abs(lab.a) < 1e-9 and abs(lab.b) < 1e-9

    def test_black(self):
        assert srgb_to_lab(SrgbColor(0, 0, 0)).as_tuple() == (0.0, 0.0, 0.0)

    def test_mid_gray(self):
        # frozen from the reference chain: 0.5 -> linear 0.21404...,
        # L = 116 * cbrt(Y) - 16
        lab = srgb_to_lab(SrgbColor(0.5, 0.5, 0.5))
        assert lab.L == pytest.approx(53.3890, abs=1e-3)
        assert abs(lab.a) < 1e-9 and abs(lab.b) < 1e-9

    def test_lab_to_srgb_white_black(self):
        white, clamped_w = lab_to_srgb(LabColor(100, 0, 0))
        black, clamped_b = lab_to_srgb(LabColor(0, 0, 0))
        assert not clamped_w and not clamped_b
        assert white.as_tuple() == pytest.approx((1, 1, 1), abs=1e-9)
        assert black.as_tuple() == pytest.approx((0, 0, 0), abs=1e-9)

    def test_mid_gray_inverse(self):
        srgb, clamped = lab_to_srgb(LabColor(53.3890, 0, 0))
        assert not clamped
        assert srgb.as_tuple() == pytest.approx((0.5, 0.5, 0.5), abs=1e-3)

    def test_roundtrip_grid(self):
        # acceptance runs 16^3; keep the unit test fast with a coarser grid
        levels = np.linspace(0, 1, 8)
        for r in levels:
            for g in levels:
                for b in levels:
                    back, clamped = lab_to_srgb(srgb_to_lab(SrgbColor(r, g, b)))
                    assert not clamped
                    assert back.as_tuple() == pytest.approx((r, g, b), abs=1e-3)

    def test_out_of_gamut_flags(self):
        _, clamped = lab_to_srgb(LabColor(50, 120, -120))
        assert clamped

    def test_channel_range_enforced(self):
        with pytest.raises(InputError):
            SrgbColor(1.2, 0, 0)
        with pytest.raises(InputError):
            LabColor(101, 0, 0)


class TestCiede2000:
    def test_conformance_pairs(self, conformance_pairs):
        assert len(conformance_pairs) == 34
        start = time.perf_counter()
        for lab1, lab2, expected in conformance_pairs:
            got = ciede2000(LabColor(*lab1), LabColor(*lab2))
            assert got == pytest.approx(expected, abs=1e-4)
        assert time.perf_counter() - start < 1.0

    def test_default_params_match_explicit_ones(self, conformance_pairs):
        lab1, lab2, _ = conformance_pairs[0]
        a, b = LabColor(*lab1), LabColor(*lab2)
        assert ciede2000(a, b) == ciede2000(a, b, DeltaEParams(1, 1, 1))

    @given(lab_colors)
    def test_identity(self, c):
        assert ciede2000(c, c) == 0.0

    @given(lab_colors, lab_colors)
    @settings(max_examples=200)
    def test_symmetry_and_nonnegativity(self, a, b):
        d = ciede2000(a, b)
        assert d >= 0.0
        assert d == pytest.approx(ciede2000(b, a), rel=1e-12, abs=1e-12)

    def test_zero_only_for_equal(self):
        a = LabColor(50, 2.5, 0)
        b = LabColor(50, 2.5001, 0)
        assert ciede2000(a, b) > 0.0

    def test_params_scale_terms(self):
        a = LabColor(40, 10, -3)
        b = LabColor(60, 10, -3)  # pure lightness difference
        full = ciede2000(a, b)
        halved = ciede2000(a, b, DeltaEParams(kL=2.0))
        assert halved == pytest.approx(full / 2.0, rel=1e-12)

    def test_rejects_nonpositive_params(self):
        with pytest.raises(InputError):
            DeltaEParams(kL=0.0)


class TestSpaceDistance:
    def test_hsv_wraparound(self):
        a = HsvColor(350, 1, 1)
        b = HsvColor(10, 1, 1)
        assert space_distance("hsv", a, b) == pytest.approx(20.0)

    @given(st.floats(0, 360, exclude_max=True), st.floats(0, 360, exclude_max=True))
    def test_hue_distance_bounded_and_periodic(self, h1, h2):
        d = hue_distance_degrees(h1, h2)
        assert 0.0 <= d <= 180.0
        assert hue_distance_degrees(h1 + 360.0, h2) == pytest.approx(d, abs=1e-9)

    def test_identical_everywhere(self):
        c = parse_hex("#123456")
        for space in ("srgb", "lab", "hsv", "ycbcr", "yuv", "cie1931"):
            p = convert(c, space)
            assert space_distance(space, p, p) == 0.0

    def test_rgb_diagonal(self):
        d = space_distance("srgb", SrgbColor(0, 0, 0), SrgbColor(1, 1, 1))
        assert d == pytest.approx(math.sqrt(3.0))

    def test_unknown_space(self):
        with pytest.raises(InputError):
            space_distance("cmyk", SrgbColor(0, 0, 0), SrgbColor(1, 1, 1))
        with pytest.raises(InputError):
            convert(SrgbColor(0, 0, 0), "cmyk")


class TestPairwiseMatrix:
    def test_identical_pair(self):
        c = srgb_to_lab(parse_hex("#808080"))
        m = pairwise_distance_matrix("lab", [c, c])
        assert np.array_equal(m, np.zeros((2, 2)))

    def test_symmetric_zero_diagonal(self):
        colors = [parse_hex(h) for h in ("#102030", "#ff0000", "#00ff7f", "#ffffff")]
        m = pairwise_distance_matrix("srgb", colors)
        assert np.array_equal(m, m.T)
        assert np.array_equal(np.diag(m), np.zeros(4))

    def test_elementwise_oracle(self):
        colors = [parse_hex(h) for h in ("#aa3311", "#33aa11", "#1133aa")]
        m = pairwise_distance_matrix("srgb", colors)
        for i in range(3):
            for j in range(3):
                if i != j:
                    assert m[i, j] == space_distance("srgb", colors[i], colors[j])

    def test_needs_two_colors(self):
        with pytest.raises(InputError):
            pairwise_distance_matrix("srgb", [parse_hex("#000000")])


class TestOtherSpaces:
    def test_ycbcr_neutral_axis(self):
        g = convert(SrgbColor(0.5, 0.5, 0.5), "ycbcr")
        assert g.cb == pytest.approx(0.0, abs=1e-12)
        assert g.cr == pytest.approx(0.0, abs=1e-12)

    def test_yuv_ranges(self):
        blue = convert(SrgbColor(0, 0, 1), "yuv")
        red = convert(SrgbColor(1, 0, 0), "yuv")
        assert abs(blue.u) <= 0.436 + 1e-9
        assert abs(red.v) <= 0.615 + 1e-9

    def test_cie1931_white_chromaticity(self):
        w = convert(SrgbColor(1, 1, 1), "cie1931")
        assert w.x == pytest.approx(0.3127, abs=2e-3)
        assert w.y == pytest.approx(0.3290, abs=2e-3)
        assert w.Y == pytest.approx(1.0, abs=1e-9)

    def test_cie1931_black_uses_white_chromaticity(self):
        b = convert(SrgbColor(0, 0, 0), "cie1931")
        w = convert(SrgbColor(1, 1, 1), "cie1931")
        assert b.Y == 0.0
        assert (b.x, b.y) == pytest.approx((w.x, w.y), abs=1e-12)

    def test_hsv_matches_known_value(self):
        hsv = convert(parse_hex("#ff8000"), "hsv")
        assert hsv.h == pytest.approx(30.12, abs=0.1)
        assert hsv.s == pytest.approx(1.0)
        assert hsv.v == pytest.approx(1.0)
