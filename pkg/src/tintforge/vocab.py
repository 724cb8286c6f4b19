"""Compound-color database, the eleven basic anchors, and hue grouping.

Anchor RGB values are not hard-coded: they come from a CSV fixture that is
authoritative, so the vocabulary can be re-anchored without code changes.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .colorspace import LabColor, SrgbColor, ciede2000, format_hex, parse_hex, srgb_to_lab
from .errors import VocabError


class HueGroup(enum.Enum):
    WARM = "warm"
    COOL = "cool"
    NEUTRAL = "neutral"


class Category(enum.Enum):
    BLENDED = "Blended"
    MODIFIED = "Modified"
    OBJECT = "Object"
    SIGNATURE = "Signature"
    ABSTRACT = "Abstract"


BASIC_COLOR_NAMES = (
    "black", "blue", "brown", "gray", "green", "orange",
    "pink", "purple", "red", "white", "yellow",
)

GROUP_MEMBERS = {
    HueGroup.WARM: ("red", "orange", "pink", "yellow"),
    HueGroup.COOL: ("blue", "green", "purple"),
    HueGroup.NEUTRAL: ("black", "white", "gray", "brown"),
}

_GROUP_OF = {name: group for group, names in GROUP_MEMBERS.items() for name in names}

# Categories whose prefix word names something other than a color property;
# such terms are the ones diffusion models mistake for objects or entities.
AMBIGUOUS_CATEGORIES = frozenset({Category.OBJECT, Category.SIGNATURE, Category.ABSTRACT})


@dataclass(frozen=True)
class BasicColor:
    name: str
    srgb: SrgbColor
    lab: LabColor
    group: HueGroup


@dataclass(frozen=True)
class CompoundColor:
    name: str
    category: Category
    srgb: SrgbColor
    basic_anchor: str

    @property
    def hex(self) -> str:
        return format_hex(self.srgb)


def _read_csv_rows(path: Path, expected_header: list[str]):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise VocabError(f"cannot read color database {path}: {exc}") from exc
    lines = text.splitlines()
    rows = []
    header_seen = False
    for lineno, line in enumerate(lines, 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = next(csv.reader([line]))
        if not header_seen:
            if [c.strip().lower() for c in cells] != expected_header:
                raise VocabError(
                    f"{path}:{lineno}: expected header {','.join(expected_header)}"
                )
            header_seen = True
            continue
        if len(cells) != len(expected_header):
            raise VocabError(f"{path}:{lineno}: expected {len(expected_header)} fields")
        rows.append((lineno, [c.strip() for c in cells]))
    if not header_seen:
        raise VocabError(f"{path}: missing header {','.join(expected_header)}")
    return rows


class Vocabulary:
    """Immutable after construction; safe to share across threads."""

    def __init__(self, basics: dict[str, BasicColor], compounds: dict[str, CompoundColor]):
        if sorted(basics) != sorted(BASIC_COLOR_NAMES):
            raise VocabError(
                f"basic colors must be exactly the 11 terms, got {sorted(basics)}"
            )
        seen_rgb = {}
        for b in basics.values():
            key = b.srgb.as_tuple()
            if key in seen_rgb:
                raise VocabError(
                    f"basic anchors {seen_rgb[key]!r} and {b.name!r} share one RGB value"
                )
            seen_rgb[key] = b.name
        self.basics = dict(basics)
        self.compounds = dict(compounds)

    def basic(self, name: str) -> BasicColor:
        return self.basics[name]

    def compound(self, name: str) -> CompoundColor:
        return self.compounds[name]

    def terms(self) -> list[str]:
        """All detectable terms (canonical names): compounds plus the 11 basics."""
        return [c.name for c in self.compounds.values()] + list(BASIC_COLOR_NAMES)

    def classify_hue_group(self, color: SrgbColor) -> tuple[HueGroup, BasicColor]:
        """Group of the perceptually nearest basic anchor.

        Ties broken by alphabetical basic name, which the fixed name order
        of BASIC_COLOR_NAMES already provides.
        """
        lab = srgb_to_lab(color)
        best = min(
            (self.basics[name] for name in BASIC_COLOR_NAMES),
            key=lambda b: (ciede2000(lab, b.lab), b.name),
        )
        return best.group, best

    def topk_basic_in_group(self, color: SrgbColor, k: int) -> list[tuple[BasicColor, float]]:
        """Top-k nearest basic terms, restricted to the classified hue group."""
        if k < 1:
            raise VocabError(f"k must be >= 1, got {k}")
        group, _ = self.classify_hue_group(color)
        lab = srgb_to_lab(color)
        ranked = sorted(
            ((self.basics[name], ciede2000(lab, self.basics[name].lab))
             for name in GROUP_MEMBERS[group]),
            key=lambda item: (item[1], item[0].name),
        )
        return ranked[:k]


def _default_fixture(name: str) -> Path:
    return Path(str(resources.files("tintforge").joinpath("data", name)))


def load_basics(path: str | Path | None = None) -> dict[str, BasicColor]:
    """Load the 11 basic anchors from a `name,hex` CSV."""
    path = Path(path) if path is not None else _default_fixture("basic_colors.csv")
    basics = {}
    for lineno, (name, hex_code) in _read_csv_rows(path, ["name", "hex"]):
        name = name.lower()
        if name in basics:
            raise VocabError(f"{path}:{lineno}: duplicate basic color {name!r}")
        if name not in _GROUP_OF:
            raise VocabError(f"{path}:{lineno}: {name!r} is not one of the 11 basic terms")
        try:
            srgb = parse_hex(hex_code)
        except Exception as exc:
            raise VocabError(f"{path}:{lineno}: {exc}") from exc
        basics[name] = BasicColor(name, srgb, srgb_to_lab(srgb), _GROUP_OF[name])
    return basics


def load_vocab(path: str | Path | None = None,
               basics_path: str | Path | None = None) -> Vocabulary:
    """Load the compound-color database plus the basic anchors.

    ``path`` points at a `name,category,hex,anchor` CSV (comments allowed
    with leading '#'); None selects the packaged fixture.
    """
    basics = load_basics(basics_path)
    path = Path(path) if path is not None else _default_fixture("compound_colors.csv")
    compounds: dict[str, CompoundColor] = {}
    for lineno, (name, category, hex_code, anchor) in _read_csv_rows(
        path, ["name", "category", "hex", "anchor"]
    ):
        name = name.strip()
        key = name.lower()
        if key in compounds:
            raise VocabError(f"{path}:{lineno}: duplicate compound color {name!r}")
        try:
            cat = Category(category.capitalize())
        except ValueError:
            raise VocabError(f"{path}:{lineno}: unknown category {category!r}") from None
        anchor = anchor.lower()
        if anchor not in _GROUP_OF:
            raise VocabError(f"{path}:{lineno}: unknown anchor {anchor!r}")
        try:
            srgb = parse_hex(hex_code)
        except Exception as exc:
            raise VocabError(f"{path}:{lineno}: {exc}") from exc
        compounds[key] = CompoundColor(name, cat, srgb, anchor)
    return Vocabulary(basics, compounds)
