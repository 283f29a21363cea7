"""Token tagging and lemmatization so morphological variants reconcile.

Normalization runs in three steps: tag every token, drop articles and
rewrite enclitic verb forms to the infinitive (proper names keep their
original surface), then replace each surface by its dictionary normal
form. Unknown tokens pass through untouched, so the whole operation is
total and idempotent.

The morphology backend is a pluggable provider; the bundled one is a
lookup-table tagger over an inflectional lexicon file
(`surface<TAB>lemma<TAB>tag`, UTF-8), with small Portuguese and English
lexicons shipped for fixtures. Drop in a bigger lexicon file for real
corpora.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional, Protocol

from .core import RawRelation

TAGS = ("SUBST", "VERB", "ADJ", "PREP", "ART", "PRON", "ADV", "PROPN", "OTHER")

# Ambiguous surfaces take the highest-priority tag their entries allow.
DEFAULT_TAG_PRIORITY = ("VERB", "SUBST", "ADJ", "ADV", "PREP", "PRON", "ART")

# Enclitic pronoun forms rewritten to the verb infinitive, e.g.
# "observá-la" -> "observar", "vendê-los" -> "vender", "parti-la" -> "partir".
DEFAULT_CLITIC_RULES = (
    (r"^(\w+)á-l[ao]s?$", r"\1ar"),
    (r"^(\w+)ê-l[ao]s?$", r"\1er"),
    (r"^(\w+)i-l[ao]s?$", r"\1ir"),
)

_EDGE_PUNCT = re.compile(r"^[.,;:!?]+|[.,;:!?]+$")
_TAGGED_TOKEN = re.compile(r"^(.+)/(%s)$" % "|".join(TAGS))


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    lemma: str
    tag: str

    def __post_init__(self) -> None:
        if not self.lemma:
            raise ValueError("token lemma must be non-empty")
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag!r}")

    def text(self) -> str:
        return f"{self.lemma}/{self.tag}"


class MorphologyProvider(Protocol):
    """Contract a morphology backend fulfils.

    Tagging is total (unknown tokens come back OTHER with lemma=surface)
    and lookup is deterministic.
    """

    def tag(self, text: str) -> list[TaggedToken]: ...

    def lookup(self, surface: str, tag: str) -> Optional[str]: ...


@dataclass
class NormalizationStats:
    """Counters accumulated over a normalization run."""

    tokens: int = 0
    misses: int = 0
    articles_removed: int = 0
    clitics_rewritten: int = 0

    def report(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


def tokenize(text: str) -> list[str]:
    tokens = []
    for raw in text.split():
        token = _EDGE_PUNCT.sub("", raw)
        if token:
            tokens.append(token)
    return tokens


class LexiconMorphology:
    """Lookup-table tagger and lemmatizer over an inflectional lexicon.

    Tagging rules, in order: a `word/TAG` token is taken at face value;
    a known surface gets its highest-priority tag; unknown capitalized
    tokens are proper names; anything else is OTHER. Surfaces are also
    tried lowercased so sentence-initial words resolve.
    """

    def __init__(self, entries: Iterable[tuple[str, str, str]],
                 tag_priority: tuple[str, ...] = DEFAULT_TAG_PRIORITY,
                 clitic_rules: Iterable[tuple[str, str]] = DEFAULT_CLITIC_RULES):
        self._lemmas: dict[tuple[str, str], str] = {}
        self._tags: dict[str, set[str]] = {}
        for surface, lemma, tag in entries:
            if tag not in TAGS:
                raise ValueError(f"unknown tag {tag!r} for lexicon surface {surface!r}")
            self._lemmas[(surface, tag)] = lemma
            self._tags.setdefault(surface, set()).add(tag)
            # Normal forms are their own entries so normalization is a
            # fixed point on already-normal text.
            self._lemmas.setdefault((lemma, tag), lemma)
            self._tags.setdefault(lemma, set()).add(tag)
        self._priority = tag_priority
        self.clitic_rules = tuple((re.compile(p), r) for p, r in clitic_rules)

    def _pick_tag(self, tags: set[str]) -> str:
        for tag in self._priority:
            if tag in tags:
                return tag
        return sorted(tags)[0]

    def tag(self, text: str) -> list[TaggedToken]:
        tokens = []
        for surface in tokenize(text):
            pre = _TAGGED_TOKEN.match(surface)
            if pre:
                word, tag = pre.group(1), pre.group(2)
                tokens.append(TaggedToken(word, word, tag))
                continue
            tags = self._tags.get(surface) or self._tags.get(surface.lower())
            if tags:
                lookup_surface = surface if surface in self._tags else surface.lower()
                tokens.append(TaggedToken(lookup_surface, lookup_surface,
                                          self._pick_tag(tags)))
            elif self._is_clitic(surface):
                tokens.append(TaggedToken(surface, surface, "VERB"))
            elif surface[0].isupper():
                tokens.append(TaggedToken(surface, surface, "PROPN"))
            else:
                tokens.append(TaggedToken(surface, surface, "OTHER"))
        return tokens

    def lookup(self, surface: str, tag: str) -> Optional[str]:
        return self._lemmas.get((surface, tag)) or self._lemmas.get((surface.lower(), tag))

    def _is_clitic(self, surface: str) -> bool:
        return any(p.match(surface) for p, _ in self.clitic_rules)

    def rewrite_clitic(self, surface: str) -> Optional[str]:
        for pattern, repl in self.clitic_rules:
            if pattern.match(surface):
                return pattern.sub(repl, surface)
        return None


def load_lexicon(path=None, bundled: Optional[str] = None,
                 **kwargs) -> LexiconMorphology:
    """Load a LexiconMorphology from a lexicon file or a bundled fixture
    ("pt" or "en")."""
    if bundled is not None:
        text = resources.files("sensenet").joinpath(f"data/lexicon_{bundled}.tsv").read_text("utf-8")
    elif path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise ValueError("either path or bundled is required")
    entries = []
    for line in text.splitlines():
        line = line.strip("\n")
        if not line or line.startswith("#"):
            continue
        surface, lemma, tag = line.split("\t")
        entries.append((surface, lemma, tag))
    return LexiconMorphology(entries, **kwargs)


def normalize_phrase(text: str, provider: MorphologyProvider,
                     stats: Optional[NormalizationStats] = None) -> list[TaggedToken]:
    """Tag, strip articles, rewrite enclitic verbs, and lemmatize a phrase."""
    out = []
    for token in provider.tag(text):
        if stats:
            stats.tokens += 1
        if token.tag == "ART":
            if stats:
                stats.articles_removed += 1
            continue
        if token.tag == "PROPN":
            out.append(token)
            continue
        surface = token.surface
        rewrite = getattr(provider, "rewrite_clitic", None)
        if token.tag == "VERB" and rewrite is not None:
            infinitive = rewrite(surface)
            if infinitive is not None:
                surface = infinitive
                if stats:
                    stats.clitics_rewritten += 1
        lemma = provider.lookup(surface, token.tag)
        if lemma is None:
            lemma = surface
            if stats:
                stats.misses += 1
        out.append(TaggedToken(token.surface, lemma, token.tag))
    return out


def normalized_text(tokens: Iterable[TaggedToken]) -> str:
    return " ".join(t.text() for t in tokens)


def strip_tags(phrase: str) -> str:
    """Remove `/TAG` suffixes from a tagged phrase ("usar/VERB caderno/SUBST"
    -> "usar caderno"). Untagged text passes through."""
    words = []
    for token in phrase.split():
        m = _TAGGED_TOKEN.match(token)
        words.append(m.group(1) if m else token)
    return " ".join(words)


def normalize_relation(rel: RawRelation, provider: MorphologyProvider,
                       stats: Optional[NormalizationStats] = None) -> RawRelation:
    """Replace both parameters by their tagged normal forms; profile and id
    pass through untouched."""
    from dataclasses import replace

    return replace(
        rel,
        param1=normalized_text(normalize_phrase(rel.param1, provider, stats)),
        param2=normalized_text(normalize_phrase(rel.param2, provider, stats)),
    )


def normalize_corpus(rels: Iterable[RawRelation], provider: MorphologyProvider
                     ) -> tuple[list[RawRelation], NormalizationStats]:
    stats = NormalizationStats()
    return [normalize_relation(r, provider, stats) for r in rels], stats
