"""Phase chaining over plain-text stage files.

Every stage reads and writes line-oriented text (the grammars in `core`),
so each step of a run is diffable and testable on its own, and running the
whole chain is byte-identical to running the stages one at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import (ConceptNet, ProfileQuery, RawRelation, Relation,
                   TypeRegistry, default_registry, parse_raw_relation_line,
                   parse_relation_line, serialize_raw_relation_line,
                   serialize_relation_line)
from .extraction import (DEFAULT_NEGATION_WINDOW, NEGATION_LEXICONS,
                         ExtractionRule, extract_corpus)
from .filtering import build_conceptnet
from .normalization import (MorphologyProvider, NormalizationStats,
                            normalize_relation)
from .relaxation import HeuristicConfig, PassReport, relax


@dataclass
class Pipeline:
    """One configured run of the generation phases."""

    rules: Sequence[ExtractionRule]
    provider: MorphologyProvider
    registry: TypeRegistry = field(default_factory=default_registry)
    heuristics: HeuristicConfig = field(default_factory=HeuristicConfig)
    negation_lexicon: Sequence[str] = NEGATION_LEXICONS["pt"]
    negation_window: int = DEFAULT_NEGATION_WINDOW
    normalize: bool = True
    property_composition: bool = True

    def extract(self, corpus_lines: Iterable[str]) -> list[RawRelation]:
        return extract_corpus(corpus_lines, self.rules, self.registry,
                              self.negation_lexicon, self.negation_window)

    def normalize_raws(self, raws: Iterable[RawRelation],
                       stats: Optional[NormalizationStats] = None
                       ) -> list[RawRelation]:
        if not self.normalize:
            return list(raws)
        return [normalize_relation(r, self.provider, stats) for r in raws]

    def relax_raws(self, raws: Iterable[RawRelation],
                   report: Optional[PassReport] = None) -> list[Relation]:
        return relax(raws, self.registry, self.heuristics, report)

    def relaxed_from_corpus(self, corpus_lines: Iterable[str],
                            stats: Optional[NormalizationStats] = None,
                            report: Optional[PassReport] = None) -> list[Relation]:
        return self.relax_raws(
            self.normalize_raws(self.extract(corpus_lines), stats), report)

    def network(self, corpus_lines: Iterable[str],
                query: Optional[ProfileQuery] = None) -> ConceptNet:
        relaxed = self.relaxed_from_corpus(corpus_lines)
        return build_conceptnet(query or ProfileQuery.match_all(), relaxed,
                                self.registry, self.property_composition)


def raw_lines(raws: Iterable[RawRelation]) -> list[str]:
    return [serialize_raw_relation_line(r) for r in raws]


def parse_raw_lines(lines: Iterable[str],
                    registry: Optional[TypeRegistry] = None) -> list[RawRelation]:
    return [parse_raw_relation_line(line, registry)
            for line in lines if line.strip()]


def relation_lines(rels: Iterable[Relation]) -> list[str]:
    return [serialize_relation_line(r) for r in rels]


def parse_relation_lines(lines: Iterable[str],
                         registry: Optional[TypeRegistry] = None) -> list[Relation]:
    return [parse_relation_line(line, registry)
            for line in lines if line.strip()]
