"""Color representations, conversions between six color spaces, and
perceptual distance metrics.

All math is double precision. The RGB working space is sRGB with a D65
white point; the white point is taken from the row sums of the forward
matrix so that pure white round-trips exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

# sRGB -> XYZ (D65), IEC 61966-2-1 matrix.
_RGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_XYZ_TO_RGB = np.linalg.inv(_RGB_TO_XYZ)

# Reference white = matrix row sums, so (1,1,1) maps to it exactly.
_WHITE = _RGB_TO_XYZ.sum(axis=1)

# CIE constants in exact rational form.
_EPSILON = 216.0 / 24389.0
_KAPPA = 24389.0 / 27.0

SPACE_IDS = ("srgb", "lab", "hsv", "ycbcr", "yuv", "cie1931")


@dataclass(frozen=True)
class SrgbColor:
    """Nonlinear sRGB with unit-interval channels (8-bit codes / 255)."""

    r: float
    g: float
    b: float

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InputError(f"sRGB channel {name}={v} outside [0, 1]")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r, self.g, self.b)


@dataclass(frozen=True)
class LabColor:
    """CIELAB: L in [0, 100], opponent axes a and b unbounded in practice."""

    L: float
    a: float
    b: float

    def __post_init__(self):
        if not 0.0 <= self.L <= 100.0:
            raise InputError(f"Lab lightness L={self.L} outside [0, 100]")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.L, self.a, self.b)


@dataclass(frozen=True)
class HsvColor:
    """Hue in degrees [0, 360), saturation and value in [0, 1]."""

    h: float
    s: float
    v: float

    def __post_init__(self):
        object.__setattr__(self, "h", self.h % 360.0)
        if not 0.0 <= self.s <= 1.0 or not 0.0 <= self.v <= 1.0:
            raise InputError("HSV saturation/value outside [0, 1]")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.h, self.s, self.v)


@dataclass(frozen=True)
class YCbCrColor:
    """BT.601 analog form: Y in [0, 1], Cb and Cr in [-0.5, 0.5]."""

    y: float
    cb: float
    cr: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.y, self.cb, self.cr)


@dataclass(frozen=True)
class YuvColor:
    """Analog YUV: Y in [0, 1], |U| <= 0.436, |V| <= 0.615."""

    y: float
    u: float
    v: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.y, self.u, self.v)


@dataclass(frozen=True)
class Xy1931Color:
    """CIE 1931 chromaticity (x, y) plus luminance Y normalized to [0, 1]."""

    x: float
    y: float
    Y: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.Y)


@dataclass(frozen=True)
class DeltaEParams:
    """Weighting parameters for the color-difference formula; default 1."""

    kL: float = 1.0
    kC: float = 1.0
    kH: float = 1.0

    def __post_init__(self):
        if min(self.kL, self.kC, self.kH) <= 0.0:
            raise InputError("DeltaE weighting parameters must be positive")


def parse_hex(text: str) -> SrgbColor:
    """Parse 'rrggbb' or '#rrggbb', case-insensitive."""
    raw = text.strip().lstrip("#")
    if len(raw) != 6 or any(c not in "0123456789abcdefABCDEF" for c in raw):
        raise InputError(f"not a 6-digit hex color: {text!r}")
    r, g, b = (int(raw[i : i + 2], 16) for i in (0, 2, 4))
    return SrgbColor(r / 255.0, g / 255.0, b / 255.0)


def format_hex(c: SrgbColor) -> str:
    vals = [int(round(ch * 255.0)) for ch in c.as_tuple()]
    return "#{:02x}{:02x}{:02x}".format(*vals)


def _srgb_transfer_inverse(u: float) -> float:
    # nonlinear sRGB code value -> linear light
    if u <= 0.04045:
        return u / 12.92
    return ((u + 0.055) / 1.055) ** 2.4


def _srgb_transfer(u: float) -> float:
    if u <= 0.0031308:
        return 12.92 * u
    return 1.055 * u ** (1.0 / 2.4) - 0.055


def _srgb_to_xyz(c: SrgbColor) -> np.ndarray:
    linear = np.array([_srgb_transfer_inverse(v) for v in c.as_tuple()])
    return _RGB_TO_XYZ @ linear


def srgb_to_lab(c: SrgbColor) -> LabColor:
    """sRGB -> XYZ(D65) -> CIELAB."""
    xyz = _srgb_to_xyz(c)
    ratios = xyz / _WHITE

    def f(t: float) -> float:
        if t > _EPSILON:
            return t ** (1.0 / 3.0)
        return (_KAPPA * t + 16.0) / 116.0

    fx, fy, fz = (float(f(t)) for t in ratios)
    L = 116.0 * fy - 16.0
    return LabColor(min(max(L, 0.0), 100.0), 500.0 * (fx - fy), 200.0 * (fy - fz))


def lab_to_srgb(c: LabColor) -> tuple[SrgbColor, bool]:
    """CIELAB -> sRGB. Returns (color, clamped): clamped is True when the
    result fell outside [0, 1] before being clipped back into gamut."""
    fy = (c.L + 16.0) / 116.0
    fx = fy + c.a / 500.0
    fz = fy - c.b / 200.0

    def f_inv(t: float) -> float:
        t3 = t ** 3
        if t3 > _EPSILON:
            return t3
        return (116.0 * t - 16.0) / _KAPPA

    xyz = np.array([f_inv(fx), f_inv(fy), f_inv(fz)]) * _WHITE
    linear = _XYZ_TO_RGB @ xyz
    channels = [float(_srgb_transfer(v)) if v > 0.0 else 12.92 * float(v) for v in linear]
    clamped = any(v < -1e-12 or v > 1.0 + 1e-12 for v in channels)
    clipped = [min(max(v, 0.0), 1.0) for v in channels]
    return SrgbColor(*clipped), clamped


def srgb_to_hsv(c: SrgbColor) -> HsvColor:
    r, g, b = c.as_tuple()
    cmax, cmin = max(r, g, b), min(r, g, b)
    delta = cmax - cmin
    if delta == 0.0:
        h = 0.0
    elif cmax == r:
        h = 60.0 * (((g - b) / delta) % 6.0)
    elif cmax == g:
        h = 60.0 * ((b - r) / delta + 2.0)
    else:
        h = 60.0 * ((r - g) / delta + 4.0)
    s = 0.0 if cmax == 0.0 else delta / cmax
    return HsvColor(h, s, cmax)


def srgb_to_ycbcr(c: SrgbColor) -> YCbCrColor:
    r, g, b = c.as_tuple()
    y = 0.299 * r + 0.587 * g + 0.114 * b
    return YCbCrColor(y, (b - y) / 1.772, (r - y) / 1.402)


def srgb_to_yuv(c: SrgbColor) -> YuvColor:
    r, g, b = c.as_tuple()
    y = 0.299 * r + 0.587 * g + 0.114 * b
    return YuvColor(y, 0.492 * (b - y), 0.877 * (r - y))


# Chromaticity of the reference white, used for colors with zero luminance
# where x and y are otherwise undefined (0/0).
_WHITE_XY = (_WHITE[0] / _WHITE.sum(), _WHITE[1] / _WHITE.sum())


def srgb_to_xy1931(c: SrgbColor) -> Xy1931Color:
    xyz = _srgb_to_xyz(c)
    total = xyz.sum()
    if total == 0.0:
        return Xy1931Color(_WHITE_XY[0], _WHITE_XY[1], 0.0)
    return Xy1931Color(xyz[0] / total, xyz[1] / total, xyz[1] / _WHITE[1])


_CONVERTERS = {
    "srgb": lambda c: c,
    "lab": srgb_to_lab,
    "hsv": srgb_to_hsv,
    "ycbcr": srgb_to_ycbcr,
    "yuv": srgb_to_yuv,
    "cie1931": srgb_to_xy1931,
}


def convert(c: SrgbColor, space_id: str):
    """Convert an sRGB color into any of the supported spaces."""
    try:
        return _CONVERTERS[space_id](c)
    except KeyError:
        raise InputError(f"unknown color space {space_id!r}") from None


def ciede2000(a: LabColor, b: LabColor, params: DeltaEParams = DeltaEParams()) -> float:
    """CIEDE2000 color difference between two CIELAB colors.

    Implements the full formula including the chroma/hue rotation term,
    with the standard hue-angle edge cases: when either adjusted chroma
    is zero the hue difference is zero and the mean hue is the plain sum.
    """
    L1, a1, b1 = a.as_tuple()
    L2, a2, b2 = b.as_tuple()

    c1 = math.hypot(a1, b1)
    c2 = math.hypot(a2, b2)
    c_bar = 0.5 * (c1 + c2)
    c_bar7 = c_bar ** 7
    g = 0.5 * (1.0 - math.sqrt(c_bar7 / (c_bar7 + 25.0 ** 7)))

    a1p = (1.0 + g) * a1
    a2p = (1.0 + g) * a2
    c1p = math.hypot(a1p, b1)
    c2p = math.hypot(a2p, b2)

    h1p = math.degrees(math.atan2(b1, a1p)) % 360.0 if (a1p, b1) != (0.0, 0.0) else 0.0
    h2p = math.degrees(math.atan2(b2, a2p)) % 360.0 if (a2p, b2) != (0.0, 0.0) else 0.0

    dLp = L2 - L1
    dCp = c2p - c1p

    if c1p * c2p == 0.0:
        dhp = 0.0
    else:
        dhp = h2p - h1p
        if dhp > 180.0:
            dhp -= 360.0
        elif dhp < -180.0:
            dhp += 360.0
    dHp = 2.0 * math.sqrt(c1p * c2p) * math.sin(math.radians(dhp) / 2.0)

    L_bar = 0.5 * (L1 + L2)
    c_bar_p = 0.5 * (c1p + c2p)

    if c1p * c2p == 0.0:
        h_bar = h1p + h2p
    elif abs(h1p - h2p) <= 180.0:
        h_bar = 0.5 * (h1p + h2p)
    elif h1p + h2p < 360.0:
        h_bar = 0.5 * (h1p + h2p + 360.0)
    else:
        h_bar = 0.5 * (h1p + h2p - 360.0)

    t = (
        1.0
        - 0.17 * math.cos(math.radians(h_bar - 30.0))
        + 0.24 * math.cos(math.radians(2.0 * h_bar))
        + 0.32 * math.cos(math.radians(3.0 * h_bar + 6.0))
        - 0.20 * math.cos(math.radians(4.0 * h_bar - 63.0))
    )

    sl = 1.0 + 0.015 * (L_bar - 50.0) ** 2 / math.sqrt(20.0 + (L_bar - 50.0) ** 2)
    sc = 1.0 + 0.045 * c_bar_p
    sh = 1.0 + 0.015 * c_bar_p * t

    c_bar_p7 = c_bar_p ** 7
    rc = 2.0 * math.sqrt(c_bar_p7 / (c_bar_p7 + 25.0 ** 7))
    d_theta = 30.0 * math.exp(-(((h_bar - 275.0) / 25.0) ** 2))
    rt = -math.sin(math.radians(2.0 * d_theta)) * rc

    vl = dLp / (params.kL * sl)
    vc = dCp / (params.kC * sc)
    vh = dHp / (params.kH * sh)
    # rounding noise can push the sum a hair below zero for near-equal inputs
    return math.sqrt(max(vl * vl + vc * vc + vh * vh + rt * vc * vh, 0.0))


def hue_distance_degrees(h1: float, h2: float) -> float:
    """Circular distance between two hue angles, always <= 180."""
    d = abs(h1 % 360.0 - h2 % 360.0)
    return min(d, 360.0 - d)


def space_distance(space_id: str, color_a, color_b) -> float:
    """Distance between two colors already expressed in ``space_id``.

    CIELAB uses the perceptual difference formula, HSV uses circular hue
    distance after projecting out saturation/value, everything else is
    Euclidean on the coordinate triple.
    """
    if space_id not in SPACE_IDS:
        raise InputError(f"unknown color space {space_id!r}")
    if space_id == "lab":
        return ciede2000(color_a, color_b)
    if space_id == "hsv":
        return hue_distance_degrees(color_a.h, color_b.h)
    pa = np.asarray(color_a.as_tuple(), dtype=float)
    pb = np.asarray(color_b.as_tuple(), dtype=float)
    return float(np.linalg.norm(pa - pb))


def pairwise_distance_matrix(space_id: str, colors: list) -> np.ndarray:
    """Symmetric zero-diagonal matrix of space_distance over >= 2 colors."""
    n = len(colors)
    if n < 2:
        raise InputError("need at least 2 colors for a distance matrix")
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = space_distance(space_id, colors[i], colors[j])
            out[i, j] = out[j, i] = d
    return out
