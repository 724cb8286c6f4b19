"""Regenerate captions_500.jsonl, the caption fixture used by the
benchmark-construction tests.

The captions imitate photo-caption phrasing and only ever use basic color
terms, grouped into topic families so the clustering stage has real
structure to find. Run from the repository root:

    python tests/data/gen_captions.py
"""

import json
from pathlib import Path

import numpy as np

TOPICS = {
    "market": ("{s} in a {c} {g} browses vegetable stalls at the crowded street market",
               ['vendor', 'shopper', 'tourist', 'peddler']),
    "bridge": ("{s} with a {c} {g} pedals a bicycle over the old stone bridge",
               ['messenger', 'commuter', 'courier', 'cyclist']),
    "beach": ("{s} toting a {c} {g} strolls down the windy beach at low tide",
              ['surfer', 'beachcomber', 'sunbather', 'lifeguard']),
    "park": ("{s} tossing a frisbee in a {c} {g} jogs over the sunny park lawn",
             ['jogger', 'picnicker', 'father', 'stroller']),
    "cafe": ("{s} holding a {c} {g} reads the specials menu outside the corner cafe",
             ['waiter', 'regular', 'patron', 'barista']),
    "stadium": ("{s} in a {c} {g} cheers the home team from the packed stadium stands",
                ['fan', 'supporter', 'cheerleader', 'drummer']),
    "kitchen": ("{s} with a {c} {g} kneads bread dough in the cramped restaurant kitchen",
                ['chef', 'cook', 'saucier', 'dishwasher']),
    "workshop": ("{s} wearing a {c} {g} sands a table leg in the dusty carpentry workshop",
                 ['carpenter', 'joiner', 'woodworker', 'cabinetmaker']),
    "station": ("{s} dragging a {c} {g} hurries down the train station platform",
                ['traveler', 'conductor', 'backpacker', 'porter']),
    "mountain": ("{s} with a {c} {g} pauses for breath on the rocky mountain trail",
                 ['hiker', 'climber', 'mountaineer', 'trekker']),
    "lake": ("{s} in a {c} {g} paddles a canoe toward the glassy alpine lake",
             ['angler', 'camper', 'ranger', 'scout']),
    "concert": ("{s} waving a {c} {g} dances near the stage at the outdoor concert",
                ['singer', 'teenager', 'roadie', 'guitarist']),
    "library": ("{s} with a {c} {g} shelves worn paperbacks in the town library",
                ['librarian', 'volunteer', 'archivist', 'bookworm']),
    "garden": ("{s} in a {c} {g} waters tomato seedlings in the community garden",
               ['gardener', 'neighbor', 'grandmother', 'botanist']),
    "garage": ("{s} in a {c} {g} tightens bolts under the lifted pickup in the garage",
               ['mechanic', 'motorist', 'apprentice', 'gearhead']),
    "school": ("{s} carrying a {c} {g} writes long equations on the classroom chalkboard",
               ['teacher', 'pupil', 'tutor', 'substitute']),
    "harbor": ("{s} hauling a {c} {g} coils thick rope on the foggy harbor dock",
               ['sailor', 'deckhand', 'captain', 'fisherman']),
    "museum": ("{s} with a {c} {g} sketches the marble statue in the museum hall",
               ['artist', 'curator', 'docent', 'copyist']),
    "farm": ("{s} in a {c} {g} pitches hay into the barn at the hillside farm",
             ['farmer', 'rancher', 'farmhand', 'milkmaid']),
    "snow": ("{s} in a {c} {g} shovels the buried driveway after the heavy snowstorm",
             ['homeowner', 'plowman', 'skier', 'paperboy']),
}

GARMENTS = ["jacket", "shirt", "scarf", "cap", "apron", "sweater", "vest", "coat"]
SECOND_ITEMS = ["backpack", "umbrella", "bandana", "tote bag", "helmet", "sash"]
COLORS = ["black", "blue", "brown", "gray", "green", "orange",
          "pink", "purple", "red", "white", "yellow"]

PLAIN = [
    "a crowd gathers to watch the street performer juggle flaming torches",
    "two chess players study the board under a large oak tree",
    "a violinist practices scales beside an open window",
    "rain drips from the awning while shoppers wait for the bus",
    "a toddler stacks wooden blocks on the living room rug",
    "the ferry horn echoes across the misty morning water",
    "a barista pours steamed milk into a paper cup",
    "students file out of the lecture hall after the final exam",
    "a postman sorts envelopes into numbered mailboxes",
    "waves crash against the lighthouse during the storm",
]


def main() -> None:
    rng = np.random.default_rng(20240817)
    records = []
    serial = 0

    def add(text: str) -> None:
        nonlocal serial
        records.append({"id": f"cap{serial:04d}", "caption": text})
        serial += 1

    # 12 single-color and 12 multi-color captions per topic family. Subject
    # words are globally unique, and each group uses only two subjects per
    # family, so any subject-level substructure the clustering finds still
    # holds at least five captions.
    for topic, (template, subjects) in TOPICS.items():
        for i in range(12):
            subject = subjects[i % 2]
            garment = GARMENTS[int(rng.integers(len(GARMENTS)))]
            color = COLORS[int(rng.integers(len(COLORS)))]
            add(template.format(s=f"a {subject}", c=color, g=garment))
        for i in range(12):
            subject = subjects[2 + (i % 2)]
            garment = GARMENTS[int(rng.integers(len(GARMENTS)))]
            item = SECOND_ITEMS[int(rng.integers(len(SECOND_ITEMS)))]
            c1, c2 = rng.choice(len(COLORS), size=2, replace=False)
            base = template.format(s=f"a {subject}", c=COLORS[c1], g=garment)
            add(f"{base} while holding a {COLORS[c2]} {item}")

    # colorless fillers exercise the dropped branch of the filter
    for i, text in enumerate(PLAIN):
        add(text)
        add(text.replace("a ", "another ", 1))

    assert len(records) == 500, len(records)
    out = Path(__file__).parent / "captions_500.jsonl"
    out.write_text(
        "\n".join(json.dumps(r, ensure_ascii=True) for r in records) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {len(records)} captions to {out}")


if __name__ == "__main__":
    main()
