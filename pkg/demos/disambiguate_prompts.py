"""
Resolving ambiguous color language
==================================

Compound color names mislead image generators two ways: the prefix word
leaks in as an object ("rose red" growing roses), or the intended hue is
missed entirely. Disambiguation maps each term to a basic color plus a
reference RGB code and rewrites the prompt.

The offline route below runs purely from the color database. The chat
endpoint route produces the same result type; see docs/llm_protocol.md
for its wire contract.
"""

from tintforge.colorspace import format_hex
from tintforge.disambiguation import detect_color_terms, disambiguate_offline
from tintforge.vocab import load_vocab

vocab = load_vocab()

############################################################################
# Detection favors the longest known phrase
# -----------------------------------------
prompt = "a lime green shirt next to a Duke blue jersey"
for match in detect_color_terms(prompt, vocab):
    print(f"detected {match.term!r} at tokens {match.token_span}")

############################################################################
# Offline resolution
# ------------------
prompts = [
    "a rose red scarf on the chair",
    "a man in a jungle green jacket",
    "a Tiffany blue gift box with a white ribbon",
    "a warm taupe sofa in the corner",
    "a plain wooden bench",
]
for text in prompts:
    result = disambiguate_offline(text, vocab)
    print(f"\n  {text}")
    print(f"  -> {result.rewritten_prompt}")
    for analysis in result.analyses:
        flag = "ambiguous" if analysis.is_ambiguous else "clear"
        print(f"     {analysis.term!r}: {flag}, basic={analysis.basic_term}, "
              f"reference={format_hex(analysis.reference_rgb)}")

############################################################################
# Rewrites are stable
# -------------------
first = disambiguate_offline("a Baker-Miller pink wall", vocab)
second = disambiguate_offline(first.rewritten_prompt, vocab)
print("\nidempotent rewrite:", first.rewritten_prompt == second.rewritten_prompt)
