"""
A tour of the color machinery
=============================

Parse hex codes, convert through the six supported spaces, and measure
perceptual differences.
"""

from tintforge.colorspace import (
    DeltaEParams,
    LabColor,
    ciede2000,
    convert,
    format_hex,
    lab_to_srgb,
    pairwise_distance_matrix,
    parse_hex,
    space_distance,
    srgb_to_lab,
)

############################################################################
# Hex in, coordinates out
# -----------------------
coral = parse_hex("#FF7F50")
print("coral sRGB:", coral.as_tuple())
for space in ("lab", "hsv", "ycbcr", "yuv", "cie1931"):
    print(f"  {space:8s} ->", convert(coral, space))

############################################################################
# Round trips stay inside a thousandth per channel
# ------------------------------------------------
back, clamped = lab_to_srgb(srgb_to_lab(coral))
print("round trip:", format_hex(back), "clamped:", clamped)

############################################################################
# Perceptual difference
# ---------------------
# A darker shade of orange against a highly saturated yellow: far apart
# perceptually, and the formula says so. For scale: ~2.3 units is a
# common just-noticeable-difference reference.
dark_orange = LabColor(66, 43, 68)
saturated_yellow = LabColor(92, -21, 94)
print("deltaE00 orange-ish vs yellow-ish:", round(ciede2000(dark_orange, saturated_yellow), 2))

# the weighting parameters default to 1 and scale the three difference terms
print("with kL=2:", round(ciede2000(dark_orange, saturated_yellow, DeltaEParams(kL=2)), 2))

############################################################################
# Distances in other spaces
# -------------------------
# HSV keeps only the hue angle (circular), the linear spaces use plain
# Euclidean distance.
red_hsv = convert(parse_hex("#ff0000"), "hsv")
rose_hsv = convert(parse_hex("#ff0080"), "hsv")
print("hue-only distance red vs rose:", round(space_distance("hsv", red_hsv, rose_hsv), 1), "degrees")

############################################################################
# Pairwise matrices feed the correlation study
# --------------------------------------------
labs = [srgb_to_lab(parse_hex(h)) for h in ("#D62828", "#FFA500", "#FFD700")]
matrix = pairwise_distance_matrix("lab", labs)
print("pairwise deltaE00 among red / orange / yellow anchors:")
print(matrix.round(2))
