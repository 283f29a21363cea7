"""Turn exported statement lines into profiled binary relations.

Each collection template has a matching extraction rule: a regular
expression with exactly two capture groups plus an anchor, the verb or
structure whose semantics selects the relation type. When a negative
adverb or adverbial phrase from the negation lexicon sits directly before
the anchor, the negative version of the type is used instead.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Optional, Sequence

from .core import ProfileAttrs, RawRelation, TypeRegistry, default_registry

log = logging.getLogger(__name__)

EXPORT_SEPARATOR = "$$"

# Tokens considered when scanning the context before an anchor.
NEGATION_LEXICONS = {
    "pt": ("não", "nunca", "quase nunca", "jamais"),
    "en": ("not", "never", "hardly ever", "no"),
}
DEFAULT_NEGATION_WINDOW = 3


class ExportLineError(ValueError):
    """An export line without the expected seven slots."""


@dataclass(frozen=True)
class ExtractionRule:
    """A pattern with two capture positions mapped to an affirmative type."""

    pattern: str
    rtype: str
    anchor: str

    def __post_init__(self) -> None:
        if re.compile(self.pattern).groups != 2:
            raise ValueError(
                f"rule for {self.rtype!r} must have exactly two capture groups: "
                f"{self.pattern!r}"
            )

    def regex(self) -> re.Pattern:
        return re.compile(self.pattern)


@dataclass(frozen=True)
class ExportLine:
    text: str
    profile: ProfileAttrs
    statement_id: int

    @classmethod
    def parse(cls, line: str) -> "ExportLine":
        parts = line.rstrip("\n").split(EXPORT_SEPARATOR)
        if len(parts) != 7:
            raise ExportLineError(
                f"expected 7 slots separated by {EXPORT_SEPARATOR!r}, "
                f"found {len(parts)}: {line!r}"
            )
        text, gender, age, education, city, state, sid = parts
        return cls(text, ProfileAttrs(gender, age, education, city, state), int(sid))

    def serialize(self) -> str:
        g, a, e, c, s = self.profile.slots()
        return EXPORT_SEPARATOR.join([self.text, g, a, e, c, s, str(self.statement_id)])


def load_rules(path=None, bundled: Optional[str] = None) -> list[ExtractionRule]:
    """Load rules from a TSV (pattern, relation type name, anchor text) or a
    bundled set ("pt" or "en")."""
    if bundled is not None:
        text = resources.files("sensenet").joinpath(f"data/rules_{bundled}.tsv").read_text("utf-8")
    elif path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise ValueError("either path or bundled is required")
    rules = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        pattern, rtype, anchor = line.split("\t")
        rules.append(ExtractionRule(pattern, rtype, anchor))
    return rules


def _window_tokens(text: str, window: int) -> list[str]:
    return [t.lower() for t in text.split()][-window:]


def _find_anchor(text: str, anchor: str, start: int) -> int:
    """Position of the first standalone occurrence of `anchor` at or after
    `start`; falls back to `start` when the anchor text is absent."""
    m = re.compile(rf"(?<!\S){re.escape(anchor)}(?!\S)").search(text, start)
    return m.start() if m else start


def resolve_polarity(text: str, anchor_pos: int, rtype: str,
                     registry: TypeRegistry,
                     negation_lexicon: Sequence[str],
                     window: int = DEFAULT_NEGATION_WINDOW) -> str:
    """Pick the affirmative or negative version of a matched rule's type.

    The tokens inside `window` positions before the anchor are scanned for
    any negation entry (single- or multi-word). Nothing before the anchor
    means affirmative. K-line types have no negative version; a negated
    k-line match falls back to the affirmative with a warning.
    """
    tail = _window_tokens(text[:anchor_pos], window)
    negated = False
    for entry in negation_lexicon:
        phrase = entry.lower().split()
        n = len(phrase)
        if n == 0 or n > len(tail):
            continue
        if any(tail[j:j + n] == phrase for j in range(len(tail) - n + 1)):
            negated = True
            break
    if not negated:
        return rtype
    negative = registry.negative_of(rtype)
    if negative is None:
        log.warning("negation before k-line type %s ignored (no negative version)", rtype)
        return rtype
    return negative


def extract(line: str, rules: Sequence[ExtractionRule],
            registry: Optional[TypeRegistry] = None,
            negation_lexicon: Sequence[str] = NEGATION_LEXICONS["pt"],
            window: int = DEFAULT_NEGATION_WINDOW) -> list[RawRelation]:
    """Apply every rule to one export line; all matches are emitted.

    Lines matching no rule yield an empty list (logged, not fatal); the
    profile slots and statement id are copied through to every relation.
    """
    registry = registry or default_registry()
    export = ExportLine.parse(line)
    found = []
    for rule in rules:
        m = rule.regex().search(export.text)
        if m is None:
            continue
        anchor_pos = _find_anchor(export.text, rule.anchor, m.start())
        rtype = resolve_polarity(export.text, anchor_pos, rule.rtype, registry,
                                 negation_lexicon, window)
        found.append(RawRelation(rtype, m.group(1), m.group(2),
                                 export.profile, export.statement_id))
    if not found:
        log.info("no extraction rule matched statement %d: %s",
                 export.statement_id, export.text)
    return found


def extract_corpus(lines: Iterable[str], rules: Sequence[ExtractionRule],
                   registry: Optional[TypeRegistry] = None,
                   negation_lexicon: Sequence[str] = NEGATION_LEXICONS["pt"],
                   window: int = DEFAULT_NEGATION_WINDOW) -> list[RawRelation]:
    """Extract a whole corpus; output ordered by statement id, then rule
    order, so parallel or shuffled processing reproduces the same file."""
    out = []
    for line in lines:
        if not line.strip():
            continue
        out.extend(extract(line, rules, registry, negation_lexicon, window))
    out.sort(key=lambda r: r.statement_id)
    return out
