"""Materialize profile-scoped networks from the relaxed relation store.

A profile query is five allow-lists (gender, age group, education, city,
state); an empty list accepts everything for that slot. Relations from
matching profiles are selected, equal keys across distinct profiles merge
with counters summed and ids unioned, profiles are dropped, and a final
PropertyOf composition pass runs over the profile-consistent result.

Materialized networks persist to disk next to a metadata sidecar and are
cached; concurrent requests for one query perform a single build.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .core import (AGE_GROUPS, GENDERS, ConceptNet, ProfileQuery,
                   ProfileVocabulary, DEFAULT_VOCABULARY, Relation,
                   TypeRegistry, default_registry, merge_equal,
                   serialize_relation_line)
from .relaxation import IS_A, PROPERTY_OF, _MergeSet, sort_relations


class QueryError(ValueError):
    pass


def parse_profile_query(spec: Sequence[Sequence[str]],
                        vocab: ProfileVocabulary = DEFAULT_VOCABULARY) -> ProfileQuery:
    """Validate and canonicalize a five-list query.

    Gender, age group, and education values must come from the closed
    vocabularies; cities and states are free-form exact-match strings.
    """
    if len(spec) != 5:
        raise QueryError(f"expected five value lists, got {len(spec)}")
    genders, ages, educations, cities, states = (list(v) for v in spec)
    for value in genders:
        if value not in vocab.genders:
            raise QueryError(f"unknown gender {value!r}")
    for value in ages:
        if value not in vocab.age_groups:
            raise QueryError(f"unknown age group {value!r}")
    for value in educations:
        if value not in vocab.educations:
            raise QueryError(f"unknown education {value!r}")
    for value in cities + states:
        if not isinstance(value, str) or not value:
            raise QueryError("city/state values must be non-empty strings")
    return ProfileQuery(tuple(genders), tuple(ages), tuple(educations),
                        tuple(cities), tuple(states))


def post_filter_property_heuristic(relations: Iterable[Relation],
                                   enabled: bool = True) -> list[Relation]:
    """Compose IsA(a,b) with PropertyOf(b,c) into PropertyOf(a,c), f=0 with
    one inferred id per composition, merged under the derivation rule.

    Runs on a profile-consistent snapshot only, single pass: freshly
    composed relations do not feed further compositions.
    """
    rels = list(relations)
    if not enabled:
        return sort_relations(rels)
    merge = _MergeSet(rels)
    snapshot = list(merge.by_key.values())
    properties: dict[str, list[Relation]] = {}
    for rel in snapshot:
        if rel.rtype == PROPERTY_OF:
            properties.setdefault(rel.param1, []).append(rel)
    for isa in snapshot:
        if isa.rtype != IS_A:
            continue
        for prop in properties.get(isa.param2, ()):
            if prop.profile != isa.profile:
                continue
            event_id = min(min(isa.ids), min(prop.ids))
            merge.add_inferred(PROPERTY_OF, isa.param1, prop.param2,
                               isa.profile, (event_id,))
    return merge.relations()


def build_conceptnet(query: ProfileQuery, rels: Iterable[Relation],
                     registry: Optional[TypeRegistry] = None,
                     property_composition: bool = True) -> ConceptNet:
    """Select relations whose profile matches the query, merge equal keys
    across profiles (counters summed, ids unioned), drop profiles, and run
    the composition heuristic. Materialized networks are canonical: id
    lists sort ascending. The result is immutable."""
    from dataclasses import replace

    registry = registry or default_registry()
    merged: dict[tuple[str, str, str], Relation] = {}
    for rel in rels:
        if rel.profile is None or not query.matches(rel.profile):
            continue
        bare = rel.with_profile(None)
        prior = merged.get(bare.key())
        merged[bare.key()] = bare if prior is None else merge_equal(prior, bare)
    final = post_filter_property_heuristic(merged.values(), property_composition)
    canonical = [replace(r, ids=tuple(sorted(r.ids))) for r in final]
    return ConceptNet(canonical, profile_query=query)


@dataclass(frozen=True)
class ConceptNetHandle:
    """A materialized network: its query, file location, and parsed form."""

    query: ProfileQuery
    path: Path
    net: ConceptNet

    def read_lines(self) -> list[str]:
        return self.path.read_text("utf-8").splitlines()


class Materializer:
    """On-demand network builder with a single-flight persistent cache.

    The canonical query serialization is the cache key. Repeated requests
    return the same handle; concurrent first requests for one query block
    on a per-key lock so exactly one build happens. Eviction is manual.
    """

    def __init__(self, relaxed_rels: Sequence[Relation], base_dir,
                 registry: Optional[TypeRegistry] = None,
                 property_composition: bool = True):
        self._rels = list(relaxed_rels)
        self._dir = Path(base_dir)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._registry = registry or default_registry()
        self._property_composition = property_composition
        self._handles: dict[str, ConceptNetHandle] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._guard = threading.Lock()
        self.build_count = 0
        digest = hashlib.sha256()
        for rel in self._rels:
            digest.update(serialize_relation_line(rel).encode("utf-8"))
        self._source_digest = digest.hexdigest()

    def _key_lock(self, key: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())

    def _paths(self, key: str) -> tuple[Path, Path]:
        name = hashlib.sha256(key.encode("utf-8")).hexdigest()[:24]
        return self._dir / f"{name}.net", self._dir / f"{name}.meta.json"

    def materialize(self, query: ProfileQuery) -> ConceptNetHandle:
        """Return the network for a query, building and persisting it only
        the first time."""
        key = query.canonical_key()
        with self._guard:
            cached = self._handles.get(key)
        if cached is not None:
            return cached
        with self._key_lock(key):
            with self._guard:
                cached = self._handles.get(key)
            if cached is not None:
                return cached
            net_path, meta_path = self._paths(key)
            if net_path.exists():
                net = ConceptNet.from_lines(
                    net_path.read_text("utf-8").splitlines(), self._registry, query)
            else:
                net = build_conceptnet(query, self._rels, self._registry,
                                       self._property_composition)
                self.build_count += 1
                net_path.write_text("".join(line + "\n" for line in net.to_lines()),
                                    encoding="utf-8")
                meta_path.write_text(json.dumps({
                    "query": query.as_lists(),
                    "built_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                    "source_digest": self._source_digest,
                    "relations": len(net),
                }, ensure_ascii=False, indent=2), encoding="utf-8")
            handle = ConceptNetHandle(query, net_path, net)
            with self._guard:
                self._handles[key] = handle
            return handle

    def evict(self, query: ProfileQuery) -> bool:
        """Drop a cached handle; the persisted files stay on disk."""
        with self._guard:
            return self._handles.pop(query.canonical_key(), None) is not None
