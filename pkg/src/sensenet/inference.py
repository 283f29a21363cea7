"""Read-only operations over materialized networks: context retrieval by
spreading activation, node display with sentence rendering and statement-id
traceback, greedy structure-mapping analogy, and query expansion helpers.

All operations are pure reads over immutable networks and safe to call
concurrently.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional, Sequence

from .core import ConceptNet, Relation, TypeRegistry, default_registry
from .normalization import MorphologyProvider, normalize_phrase, strip_tags

DEFAULT_DEPTH = 2
DEFAULT_DECAY = 0.5
# Concepts reached from every seed get their summed activation doubled.
INTERSECTION_BOOST = 2.0


@dataclass(frozen=True)
class ScoredConcept:
    concept: str
    score: float


def _edge_weights(net: ConceptNet) -> dict[str, dict[str, float]]:
    """Undirected adjacency with parallel relations aggregated: the strength
    between two concepts sums ln(1 + f + i) over every relation joining
    them. Self-loops do not contribute edges."""
    weights: dict[str, dict[str, float]] = {}
    for rel in net.relations:
        if rel.param1 == rel.param2:
            continue
        w = math.log(1 + rel.f + rel.i)
        weights.setdefault(rel.param1, {}).setdefault(rel.param2, 0.0)
        weights.setdefault(rel.param2, {}).setdefault(rel.param1, 0.0)
        weights[rel.param1][rel.param2] += w
        weights[rel.param2][rel.param1] += w
    return weights


def _activation_from(seed: str, weights: dict[str, dict[str, float]],
                     depth: int, decay: float) -> dict[str, float]:
    """Sum, over every simple path of at most `depth` edges from the seed,
    the product of edge strengths damped by decay^(length-1)."""
    scores: dict[str, float] = {}

    def walk(node: str, product: float, length: int, visited: frozenset[str]) -> None:
        for neighbor, w in weights.get(node, {}).items():
            if neighbor in visited:
                continue
            contribution = product * w * (decay ** length)
            scores[neighbor] = scores.get(neighbor, 0.0) + contribution
            if length + 1 < depth:
                walk(neighbor, product * w, length + 1, visited | {neighbor})

    walk(seed, 1.0, 0, frozenset([seed]))
    return scores


def get_context(seeds: Sequence[str] | str, net: ConceptNet,
                depth: int = DEFAULT_DEPTH,
                decay: float = DEFAULT_DECAY) -> list[ScoredConcept]:
    """Concepts contextually related to the seeds, by spreading activation.

    Activation flows along relations regardless of direction. With several
    seeds, per-seed activations sum and concepts reached from all seeds are
    boosted. Seeds never appear in their own context; results sort by
    descending score, ties by concept.
    """
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    seed_list = [seeds] if isinstance(seeds, str) else list(seeds)
    weights = _edge_weights(net)
    per_seed = [_activation_from(s, weights, depth, decay) for s in seed_list]
    totals: dict[str, float] = {}
    for scores in per_seed:
        for concept, score in scores.items():
            totals[concept] = totals.get(concept, 0.0) + score
    if len(seed_list) > 1:
        for concept in totals:
            if all(scores.get(concept, 0.0) > 0.0 for scores in per_seed):
                totals[concept] *= INTERSECTION_BOOST
    for seed in seed_list:
        totals.pop(seed, None)
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    return [ScoredConcept(c, s) for c, s in ranked]


class RenderTemplates:
    """Sentence patterns per relation type, with `{1}`/`{2}` slots and an
    optional negative form used by the type's negative version."""

    def __init__(self, patterns: dict[str, tuple[str, Optional[str]]]):
        self._patterns = dict(patterns)

    @classmethod
    def load(cls, path=None) -> "RenderTemplates":
        if path is None:
            text = resources.files("sensenet").joinpath("data/render_templates.tsv").read_text("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        patterns = {}
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            rtype, affirmative = parts[0], parts[1]
            negative = parts[2] if len(parts) > 2 and parts[2] else None
            patterns[rtype] = (affirmative, negative)
        return cls(patterns)

    def get(self, rtype: str) -> Optional[tuple[str, Optional[str]]]:
        return self._patterns.get(rtype)

    def with_pattern(self, rtype: str, affirmative: str,
                     negative: Optional[str] = None) -> "RenderTemplates":
        patterns = dict(self._patterns)
        patterns[rtype] = (affirmative, negative)
        return RenderTemplates(patterns)

    def types(self) -> list[str]:
        return sorted(self._patterns)


_DEFAULT_TEMPLATES: Optional[RenderTemplates] = None


def default_templates() -> RenderTemplates:
    global _DEFAULT_TEMPLATES
    if _DEFAULT_TEMPLATES is None:
        _DEFAULT_TEMPLATES = RenderTemplates.load()
    return _DEFAULT_TEMPLATES


def render_sentence(rel: Relation, templates: Optional[RenderTemplates] = None,
                    registry: Optional[TypeRegistry] = None,
                    capitalize: bool = False) -> str:
    """Instantiate the type's sentence pattern with the tag-stripped
    parameters. Negative types use their affirmative's negative form; a
    type without any pattern falls back to an explicit rendering."""
    templates = templates or default_templates()
    registry = registry or default_registry()
    p1, p2 = strip_tags(rel.param1), strip_tags(rel.param2)
    rtype = registry.get(rel.rtype)
    pattern: Optional[str] = None
    if rtype.polarity == "negative":
        entry = templates.get(rtype.affirmative_counterpart or "")
        if entry is not None:
            pattern = entry[1]
    else:
        entry = templates.get(rtype.name)
        if entry is not None:
            pattern = entry[0]
    if pattern is None:
        sentence = f"{p1} — {rtype.name} — {p2}"
    else:
        sentence = pattern.replace("{1}", p1).replace("{2}", p2)
    if capitalize and sentence:
        sentence = sentence[0].upper() + sentence[1:]
    return sentence


def display_node(concept: str, net: ConceptNet,
                 templates: Optional[RenderTemplates] = None,
                 registry: Optional[TypeRegistry] = None
                 ) -> list[tuple[Relation, str, tuple[int, ...]]]:
    """Every relation incident to a concept, with its rendered sentence and
    the originating statement ids for traceback to the collected text."""
    out = []
    for rel in net.incident(concept):
        out.append((rel, render_sentence(rel, templates, registry), rel.ids))
    return out


@dataclass(frozen=True)
class Correspondence:
    """One concept pairing of an analogy, with the relation pairs that
    supported it when it was fixed and their count as its systematicity."""

    base_concept: str
    target_concept: str
    supporting: tuple[tuple[Relation, Relation], ...]
    systematicity: int

    @property
    def is_literal(self) -> bool:
        return (
            self.base_concept == self.target_concept
            and any(b.key() == t.key() for b, t in self.supporting)
        )


def _support(base_rels, target_rels, b: str, t: str,
             mapping: dict[str, str], realized: bool) -> list[tuple[Relation, Relation]]:
    """Relation pairs of equal type that would align b with t.

    With realized=True the other endpoints must already correspond (equal
    concepts or an existing pairing); otherwise it is enough that pairing
    them would not contradict the mapping.
    """
    reverse = {v: k for k, v in mapping.items()}
    pairs = []
    for rb in base_rels:
        for rt in target_rels:
            if rb.rtype != rt.rtype:
                continue
            for position in (0, 1):
                b_end = (rb.param1, rb.param2)[position]
                t_end = (rt.param1, rt.param2)[position]
                if b_end != b or t_end != t:
                    continue
                b_other = (rb.param2, rb.param1)[position]
                t_other = (rt.param2, rt.param1)[position]
                if realized:
                    ok = (mapping.get(b_other) == t_other
                          or (b_other == t_other and b_other not in mapping
                              and t_other not in reverse)
                          or (b_other == b and t_other == t))
                else:
                    ok = (mapping.get(b_other, t_other) == t_other
                          and reverse.get(t_other, b_other) == b_other)
                if ok:
                    pairs.append((rb, rt))
    return pairs


def aligned_pairs(base: ConceptNet, target: ConceptNet,
                  mapping: dict[str, str]) -> int:
    """Count relation pairs of equal type whose both endpoint pairs are
    explicitly realized by the mapping. This is the mapping-level
    systematicity of an alignment."""
    def maps_to(b_end: str, t_end: str) -> bool:
        return mapping.get(b_end) == t_end

    count = 0
    for rb in base.relations:
        for rt in target.relations:
            if rb.rtype == rt.rtype and maps_to(rb.param1, rt.param1) \
                    and maps_to(rb.param2, rt.param2):
                count += 1
    return count


def _greedy_alignment(base: ConceptNet, target: ConceptNet,
                      first: Optional[tuple[str, str]] = None
                      ) -> tuple[list[Correspondence], dict[str, str]]:
    """One greedy run: fix the highest-scoring consistent candidate each
    round (realized support; ties lexicographic), seeding from potential
    support when no realized candidate exists. `first` forces the opening
    pairing."""
    base_nodes, target_nodes = base.nodes(), target.nodes()
    mapping: dict[str, str] = {}
    result: list[Correspondence] = []
    if first is not None:
        b, t = first
        support = _support(base.incident(b), target.incident(t), b, t,
                           mapping, realized=True)
        mapping[b] = t
        result.append(Correspondence(b, t, tuple(support), len(support)))
    while True:
        mapped_targets = set(mapping.values())
        candidates = [
            (b, t)
            for b in base_nodes if b not in mapping
            for t in target_nodes if t not in mapped_targets
        ]
        if not candidates:
            break
        best = None
        for b, t in candidates:
            support = _support(base.incident(b), target.incident(t), b, t,
                               mapping, realized=True)
            if support and (best is None or (-len(support), b, t) < best[0]):
                best = ((-len(support), b, t), support)
        if best is None:
            seeded = None
            for b, t in candidates:
                potential = _support(base.incident(b), target.incident(t), b, t,
                                     mapping, realized=False)
                if potential and (seeded is None or (-len(potential), b, t) < seeded[0]):
                    seeded = ((-len(potential), b, t), potential)
            if seeded is None:
                break
            (_, b, t), _ = seeded
            mapping[b] = t
            result.append(Correspondence(b, t, (), 0))
            continue
        (_, b, t), support = best
        mapping[b] = t
        result.append(Correspondence(b, t, tuple(support), len(support)))
    return result, mapping


def _improve_mapping(base: ConceptNet, target: ConceptNet,
                     mapping: dict[str, str]) -> tuple[dict[str, str], int]:
    """First-improvement hill climbing over reassign/add/drop/swap moves,
    scored by fully aligned relation pairs. Deterministic."""
    base_nodes, target_nodes = sorted(base.nodes()), sorted(target.nodes())
    current = dict(mapping)
    best = aligned_pairs(base, target, current)
    improved = True
    while improved:
        improved = False
        for b in base_nodes:
            held = current.get(b)
            taken = set(current.values())
            for t in [*[t for t in target_nodes if t not in taken], None]:
                trial = dict(current)
                if t is None:
                    trial.pop(b, None)
                elif t != held:
                    trial[b] = t
                else:
                    continue
                score = aligned_pairs(base, target, trial)
                if score > best:
                    current, best, improved = trial, score, True
                    break
            if improved:
                break
        if improved:
            continue
        mapped = sorted(current)
        for i, b1 in enumerate(mapped):
            for b2 in mapped[i + 1:]:
                trial = dict(current)
                trial[b1], trial[b2] = trial[b2], trial[b1]
                score = aligned_pairs(base, target, trial)
                if score > best:
                    current, best, improved = trial, score, True
                    break
            if improved:
                break
    return current, best


EXACT_SEARCH_MAX_CONCEPTS = 8


def _exact_small_mapping(base: ConceptNet, target: ConceptNet
                         ) -> tuple[dict[str, str], int]:
    """Exhaustive one-to-one alignment search, feasible only for small
    networks. Enumerates injective maps of the smaller concept side into
    the larger one and returns the mapping aligning the most relation
    pairs."""
    from itertools import permutations

    pairs = [
        (rb.param1, rb.param2, rt.param1, rt.param2)
        for rb in base.relations
        for rt in target.relations
        if rb.rtype == rt.rtype
    ]
    if not pairs:
        return {}, 0
    base_nodes, target_nodes = sorted(base.nodes()), sorted(target.nodes())
    invert = len(base_nodes) > len(target_nodes)
    small = target_nodes if invert else base_nodes
    large = base_nodes if invert else target_nodes
    best_score, best_mapping = -1, {}
    for image in permutations(large, len(small)):
        if invert:
            mapping = dict(zip(image, small))
        else:
            mapping = dict(zip(small, image))
        score = sum(1 for b1, b2, t1, t2 in pairs
                    if mapping.get(b1) == t1 and mapping.get(b2) == t2)
        if score > best_score:
            best_score, best_mapping = score, mapping
    return best_mapping, best_score


def _correspondences_from(base: ConceptNet, target: ConceptNet,
                          mapping: dict[str, str]) -> list[Correspondence]:
    """Rebuild pairings from a final mapping, each supported by the relation
    pairs it fully aligns."""
    support: dict[tuple[str, str], list] = {pair: [] for pair in mapping.items()}
    for rb in base.relations:
        for rt in target.relations:
            if rb.rtype != rt.rtype:
                continue
            if mapping.get(rb.param1) == rt.param1 \
                    and mapping.get(rb.param2) == rt.param2:
                support[(rb.param1, rt.param1)].append((rb, rt))
                if (rb.param2, rt.param2) != (rb.param1, rt.param1):
                    support[(rb.param2, rt.param2)].append((rb, rt))
    return [Correspondence(b, t, tuple(pairs), len(pairs))
            for (b, t), pairs in support.items()]


def get_analogy(base: ConceptNet, target: ConceptNet) -> list[Correspondence]:
    """Greedy structure mapping between a base and a target network.

    Candidate concept pairs score by the relation pairs of equal type they
    would align whose other endpoints already correspond; the best
    consistent candidate is fixed each round (ties broken lexicographically)
    with that score as its systematicity. A single greedy pass can lock
    itself out of a better alignment, so the run restarts once per
    structurally plausible opening pairing, a local-improvement pass
    follows, and networks small enough for exhaustive search are refined
    exactly; the mapping aligning the most relation pairs wins, the plain
    run on ties (so re-derived runs report each pairing's support under the
    final mapping). Pairings are one-to-one; literal similarities (same
    concept, identical relation in both nets) sort first.
    """
    if len(base) == 0 or len(target) == 0:
        raise ValueError("analogy needs two non-empty networks")
    result, mapping = _greedy_alignment(base, target)
    best_score = aligned_pairs(base, target, mapping)
    best_mapping = mapping
    openings = set()
    for rb in base.relations:
        for rt in target.relations:
            if rb.rtype == rt.rtype:
                openings.add((rb.param1, rt.param1))
                openings.add((rb.param2, rt.param2))
    for first in sorted(openings):
        candidate, candidate_mapping = _greedy_alignment(base, target, first)
        score = aligned_pairs(base, target, candidate_mapping)
        if score > best_score:
            result, best_score, best_mapping = candidate, score, candidate_mapping
    rebuilt = None
    climbed_mapping, climbed_score = _improve_mapping(base, target, best_mapping)
    if climbed_score > best_score:
        rebuilt, best_score = climbed_mapping, climbed_score
    if max(len(base.nodes()), len(target.nodes())) <= EXACT_SEARCH_MAX_CONCEPTS:
        exact_mapping, exact_score = _exact_small_mapping(base, target)
        if exact_score > best_score:
            rebuilt, best_score = exact_mapping, exact_score
    if rebuilt is not None:
        result = _correspondences_from(base, target, rebuilt)
    result.sort(key=lambda c: (not c.is_literal, -c.systematicity,
                               c.base_concept, c.target_concept))
    return result


def expand_query(expression: str, net: ConceptNet,
                 morphology: MorphologyProvider) -> list[str]:
    """Concepts related to a (possibly inflected) expression.

    The expression is lemmatized; context results for exactly matching
    nodes come first, then every network concept containing the lemmatized
    expression as a substring of its tag-stripped label.
    """
    lemmas = " ".join(t.lemma for t in normalize_phrase(expression, morphology))
    stripped = {node: strip_tags(node) for node in net.nodes()}
    exact = [node for node, plain in stripped.items() if plain == lemmas]
    out: list[str] = []
    if exact:
        out.extend(sc.concept for sc in get_context(exact, net))
    substrings = sorted(node for node, plain in stripped.items()
                        if lemmas and lemmas in plain)
    seen = set(out)
    for node in substrings:
        if node not in seen:
            out.append(node)
            seen.add(node)
    return out


_WORD = re.compile(r"\S+")

_NOUNISH = ("SUBST", "PROPN", "ADJ")


def decompose_phrases(expression: str, morphology: MorphologyProvider) -> list[str]:
    """Sub-expressions of a query worth searching separately.

    Emits the whole expression, noun phrases (adjective/noun runs, with
    preposition-linked chains), and verb phrases (a verb plus a following
    noun-phrase chain), deduplicated, longest first. Every emitted span is
    a contiguous piece of the input.
    """
    matches = list(_WORD.finditer(expression))
    if not matches:
        return []
    tagged = morphology.tag(expression)
    if len(tagged) != len(matches):
        # Tokenizer disagreement (stripped punctuation): fall back to the
        # whole expression only.
        return [expression.strip()]
    tags = [t.tag for t in tagged]
    n = len(matches)

    def span(i: int, j: int) -> str:
        return expression[matches[i].start():matches[j - 1].end()]

    # Base noun phrases: maximal runs of nounish tags.
    base_runs: list[tuple[int, int]] = []
    i = 0
    while i < n:
        if tags[i] in _NOUNISH:
            j = i
            while j + 1 < n and tags[j + 1] in _NOUNISH:
                j += 1
            base_runs.append((i, j + 1))
            i = j + 1
        else:
            i += 1

    spans: list[tuple[int, int]] = [(0, n)]
    # Preposition-linked chains: run (PREP+ART? run)*, every prefix ending
    # at a run boundary is itself a phrase.
    for idx, (start, end) in enumerate(base_runs):
        spans.append((start, end))
        cursor_end = end
        for start2, end2 in base_runs[idx + 1:]:
            gap = tags[cursor_end:start2]
            if not gap or not all(t in ("PREP", "ART") for t in gap):
                break
            spans.append((start, end2))
            cursor_end = end2
    # Verb phrases: a verb immediately followed by a chain start.
    chain_spans = [s for s in spans if s != (0, n)]
    for v in range(n):
        if tags[v] != "VERB":
            continue
        for start, end in chain_spans:
            if start == v + 1:
                spans.append((v, end))

    texts = []
    seen = set()
    for start, end in spans:
        text = span(start, end)
        if text not in seen:
            seen.add(text)
            texts.append(text)
    texts.sort(key=lambda t: (-len(t), expression.find(t)))
    return texts
