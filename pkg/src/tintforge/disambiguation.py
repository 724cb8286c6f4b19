"""Semantic color disambiguation: detect color terms in prompts, resolve
them to basic anchors with reference RGB codes, and rewrite the prompt.

Two routes produce the same result type: a chat-completion endpoint doing
the semantic analysis, and a deterministic offline fallback driven entirely
by the compound-color database.
"""

from __future__ import annotations

import json
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import jsonschema
import requests

from .colorspace import SrgbColor, format_hex, parse_hex
from .errors import InputError, NetworkError, SchemaError
from .vocab import AMBIGUOUS_CATEGORIES, BASIC_COLOR_NAMES, Vocabulary

_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'-]*")

API_KEY_ENV_VAR = "TINTFORGE_API_KEY"


@dataclass(frozen=True)
class TermMatch:
    """A detected color term: canonical name plus where it sits in the
    prompt, as a half-open word-token range and a character range."""

    term: str
    token_span: tuple[int, int]
    char_span: tuple[int, int]


@dataclass(frozen=True)
class ColorAnalysis:
    """Verdict for one detected term. ``basic_term`` is None only for
    terms that could not be resolved to any of the 11 basics."""

    term: str
    is_ambiguous: bool
    basic_term: str | None
    reference_rgb: SrgbColor | None
    span: tuple[int, int]

    def __post_init__(self):
        if self.basic_term is not None and self.basic_term not in BASIC_COLOR_NAMES:
            raise InputError(f"basic_term {self.basic_term!r} is not a basic color")
        if self.span[0] >= self.span[1]:
            raise InputError(f"empty span {self.span}")

    @property
    def resolved(self) -> bool:
        return self.basic_term is not None

    def to_json_dict(self) -> dict:
        return {
            "term": self.term,
            "ambiguous": self.is_ambiguous,
            "basic": self.basic_term,
            "hex": format_hex(self.reference_rgb) if self.reference_rgb else None,
            "span": list(self.span),
        }


@dataclass(frozen=True)
class DisambiguationResult:
    original_prompt: str
    rewritten_prompt: str
    analyses: list[ColorAnalysis]

    def to_json_dict(self) -> dict:
        return {
            "original_prompt": self.original_prompt,
            "rewritten_prompt": self.rewritten_prompt,
            "analyses": [a.to_json_dict() for a in self.analyses],
        }


def _tokenize(text: str) -> list[re.Match]:
    return list(_WORD_RE.finditer(text))


def _term_tokens(term: str) -> tuple[str, ...]:
    return tuple(m.group(0).lower() for m in _WORD_RE.finditer(term))


def detect_color_terms(prompt: str, vocab: Vocabulary) -> list[TermMatch]:
    """Longest-match scan for compound names and the 11 basics.

    Compounds win over their embedded basics ("lime green" is one term,
    not "green"); matches never overlap; matching is case-insensitive on
    word boundaries.
    """
    if not prompt:
        raise InputError("prompt must be non-empty")
    lexicon: dict[tuple[str, ...], str] = {}
    for name in vocab.terms():
        lexicon[_term_tokens(name)] = name
    max_len = max((len(k) for k in lexicon), default=0)

    tokens = _tokenize(prompt)
    words = [m.group(0).lower() for m in tokens]
    matches: list[TermMatch] = []
    i = 0
    while i < len(words):
        found = None
        for n in range(min(max_len, len(words) - i), 0, -1):
            key = tuple(words[i : i + n])
            if key in lexicon:
                found = (lexicon[key], n)
                break
        if found is None:
            i += 1
            continue
        term, n = found
        matches.append(
            TermMatch(
                term=term,
                token_span=(i, i + n),
                char_span=(tokens[i].start(), tokens[i + n - 1].end()),
            )
        )
        i += n
    return matches


def analyze_term(term: str, vocab: Vocabulary, span: tuple[int, int]) -> ColorAnalysis:
    """Resolve one term offline.

    Database compounds use their stored anchor and RGB code; ambiguity
    follows the category (object/signature/abstract prefixes mislead
    generation, blends and lightness modifiers do not). Bare basics are
    unambiguous. A term that merely parses as a hex code is classified by
    its nearest anchor; anything else comes back unresolved.
    """
    key = term.lower()
    if key in vocab.compounds:
        record = vocab.compounds[key]
        return ColorAnalysis(
            term=term,
            is_ambiguous=record.category in AMBIGUOUS_CATEGORIES,
            basic_term=record.basic_anchor,
            reference_rgb=record.srgb,
            span=span,
        )
    if key in BASIC_COLOR_NAMES:
        return ColorAnalysis(
            term=term,
            is_ambiguous=False,
            basic_term=key,
            reference_rgb=vocab.basic(key).srgb,
            span=span,
        )
    try:
        rgb = parse_hex(term)
    except InputError:
        return ColorAnalysis(term=term, is_ambiguous=True, basic_term=None,
                             reference_rgb=None, span=span)
    _, nearest_basic = vocab.classify_hue_group(rgb)
    return ColorAnalysis(
        term=term, is_ambiguous=True, basic_term=nearest_basic.name,
        reference_rgb=rgb, span=span,
    )


def _rewrite(prompt: str, replacements: list[tuple[tuple[int, int], str]]) -> str:
    """Splice replacement text over non-overlapping char spans."""
    out = []
    cursor = 0
    for (start, end), text in sorted(replacements):
        out.append(prompt[cursor:start])
        out.append(text)
        cursor = end
    out.append(prompt[cursor:])
    return "".join(out)


def disambiguate_offline(prompt: str, vocab: Vocabulary) -> DisambiguationResult:
    """Deterministic disambiguation from the database alone: compounds are
    replaced by their basic anchor, bare basics pass through unchanged."""
    matches = detect_color_terms(prompt, vocab)
    analyses = []
    replacements = []
    for match in matches:
        analysis = analyze_term(match.term, vocab, match.token_span)
        analyses.append(analysis)
        if analysis.resolved and match.term.lower() not in BASIC_COLOR_NAMES:
            replacements.append((match.char_span, analysis.basic_term))
    rewritten = _rewrite(prompt, replacements) if replacements else prompt
    return DisambiguationResult(prompt, rewritten, analyses)


# ---------------------------------------------------------------------------
# chat-completion route

RESPONSE_SCHEMA = {
    "type": "object",
    "required": ["analyses", "rewritten_prompt"],
    "properties": {
        "rewritten_prompt": {"type": "string"},
        "analyses": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["term", "ambiguous", "basic", "hex"],
                "properties": {
                    "term": {"type": "string", "minLength": 1},
                    "ambiguous": {"type": "boolean"},
                    "basic": {"type": "string"},
                    "hex": {"type": "string"},
                    "rewritten_fragment": {"type": "string"},
                },
            },
        },
    },
}

SYSTEM_PROMPT = """You analyze color language in image-generation prompts.
For every color term in the user's prompt, decide whether it could mislead an
image generator (ambiguous), pick the single basic color among
black, blue, brown, gray, green, orange, pink, purple, red, white, yellow
that best represents the intended hue, and give a 6-digit hex reference code
for the intended color in context. Rewrite the prompt so each ambiguous term
is replaced with unambiguous color wording.
Reply with JSON only, exactly this shape:
{"analyses":[{"term":"...","ambiguous":true,"basic":"...","hex":"#RRGGBB",
"rewritten_fragment":"..."}],"rewritten_prompt":"..."}
If the prompt has no color terms, reply {"analyses":[],"rewritten_prompt":<original>}."""


@dataclass(frozen=True)
class EndpointConfig:
    """Where and how to reach an OpenAI-compatible chat-completion API."""

    base_url: str
    model: str
    api_key: str | None = None
    timeout: float = 30.0
    max_retries: int = 3
    backoff: float = 0.5
    max_concurrency: int = 4

    def resolved_key(self) -> str:
        key = self.api_key or os.environ.get(API_KEY_ENV_VAR, "")
        return key

    def url(self) -> str:
        return self.base_url.rstrip("/") + "/chat/completions"


def _post_chat(config: EndpointConfig, messages: list[dict], session) -> dict:
    payload = {
        "model": config.model,
        "temperature": 0,
        "response_format": {"type": "json_object"},
        "messages": messages,
    }
    headers = {"Content-Type": "application/json"}
    key = config.resolved_key()
    if key:
        headers["Authorization"] = f"Bearer {key}"
    last_error: Exception | None = None
    for attempt in range(config.max_retries):
        if attempt:
            time.sleep(config.backoff * 2 ** (attempt - 1))
        try:
            response = session.post(
                config.url(), headers=headers, json=payload, timeout=config.timeout
            )
        except requests.RequestException as exc:
            last_error = exc
            continue
        if response.status_code == 429 or response.status_code >= 500:
            last_error = NetworkError(f"HTTP {response.status_code} from endpoint")
            continue
        if response.status_code >= 400:
            raise NetworkError(f"HTTP {response.status_code} from endpoint")
        try:
            return response.json()
        except ValueError as exc:
            raise SchemaError(f"endpoint returned non-JSON body: {exc}") from exc
    raise NetworkError(
        f"endpoint unreachable after {config.max_retries} attempts: {last_error}"
    )


def _parse_reply(reply: dict, prompt: str, vocab: Vocabulary) -> DisambiguationResult:
    try:
        content = reply["choices"][0]["message"]["content"]
    except (KeyError, IndexError, TypeError) as exc:
        raise SchemaError(f"missing choices[0].message.content: {exc}") from exc
    try:
        data = json.loads(content)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"reply content is not JSON: {exc}") from exc
    try:
        jsonschema.validate(data, RESPONSE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"reply violates response schema: {exc.message}") from exc

    analyses = []
    for item in data["analyses"]:
        basic = item["basic"].lower().strip()
        if basic not in BASIC_COLOR_NAMES:
            raise SchemaError(f"basic term {item['basic']!r} not among the 11 basics")
        try:
            rgb = parse_hex(item["hex"])
        except InputError as exc:
            raise SchemaError(str(exc)) from exc
        span = _locate_term(prompt, item["term"])
        if span is None:
            raise SchemaError(f"term {item['term']!r} does not occur in the prompt")
        analyses.append(
            ColorAnalysis(
                term=item["term"],
                is_ambiguous=bool(item["ambiguous"]),
                basic_term=basic,
                reference_rgb=rgb,
                span=span,
            )
        )
    return DisambiguationResult(prompt, data["rewritten_prompt"], analyses)


def _locate_term(prompt: str, term: str) -> tuple[int, int] | None:
    words = [m.group(0).lower() for m in _tokenize(prompt)]
    needle = _term_tokens(term)
    if not needle:
        return None
    for i in range(len(words) - len(needle) + 1):
        if tuple(words[i : i + len(needle)]) == needle:
            return (i, i + len(needle))
    return None


def disambiguate_llm(
    prompt: str,
    vocab: Vocabulary,
    config: EndpointConfig,
    session=None,
) -> DisambiguationResult:
    """Ask the configured endpoint to analyze the prompt.

    Schema-violating replies get exactly one corrective re-ask; network
    failures are retried with exponential backoff up to the configured
    attempt budget.
    """
    if not prompt:
        raise InputError("prompt must be non-empty")
    own_session = session is None
    session = session or requests.Session()
    messages = [
        {"role": "system", "content": SYSTEM_PROMPT},
        {"role": "user", "content": prompt},
    ]
    try:
        reply = _post_chat(config, messages, session)
        try:
            return _parse_reply(reply, prompt, vocab)
        except SchemaError as first:
            messages = messages + [
                {"role": "assistant", "content": json.dumps(reply, default=str)},
                {
                    "role": "user",
                    "content": (
                        f"Your previous reply was invalid ({first}). "
                        "Reply again with JSON matching the required shape exactly."
                    ),
                },
            ]
            reply = _post_chat(config, messages, session)
            return _parse_reply(reply, prompt, vocab)
    finally:
        if own_session:
            session.close()


def disambiguate_many(
    prompts: list[str],
    vocab: Vocabulary,
    config: EndpointConfig,
    session=None,
) -> list[DisambiguationResult]:
    """Concurrent disambiguation with the configured parallelism bound;
    each prompt keeps independent retry state."""
    with ThreadPoolExecutor(max_workers=config.max_concurrency) as pool:
        futures = [
            pool.submit(disambiguate_llm, prompt, vocab, config, session)
            for prompt in prompts
        ]
        return [f.result() for f in futures]
