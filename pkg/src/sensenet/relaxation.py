"""Counter seeding, reconciliation of equal relations, and heuristic
derivation of new relations to raise network connectivity.

Every directly extracted relation starts at f=1;i=0. Equal relations
(same type, parameters, and contributor profile) group into one record
whose f counts the grouped sources and whose id list unions them. The
derivation passes then add inferred relations with f=0, incrementing i
and appending ids when a derived relation already exists.

Re-deriving from an already-recorded source id is a no-op, which keeps i
an honest derivation count across repeated runs: every pass is idempotent
on its own output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .core import (ProfileAttrs, RawRelation, Relation, TypeRegistry,
                   default_registry)
from .normalization import TAGS

PROPERTY_OF = "PropertyOf"
IS_A = "IsA"
USED_FOR = "UsedFor"
THEMATIC_KLINE = "ThematicKLine"
SUPER_THEMATIC_KLINE = "SuperThematicKLine"
CAPABLE_OF = "CapableOf"
CAPABLE_OF_RECEIVING = "CapableOfReceivingAction"

_GroupKey = tuple[str, str, str, Optional[ProfileAttrs]]


def _group_key(rel: Relation) -> _GroupKey:
    return (rel.rtype, rel.param1, rel.param2, rel.profile)


def _tags(param: str) -> list[str]:
    tags = []
    for token in param.split():
        head, sep, tag = token.rpartition("/")
        tags.append(tag if sep and head and tag in TAGS else "")
    return tags


def _is_noun_phrase(param: str) -> bool:
    tags = _tags(param)
    return any(t in ("SUBST", "PROPN") for t in tags) and "VERB" not in tags


def _is_adjective(param: str) -> bool:
    tags = _tags(param)
    return bool(tags) and all(t == "ADJ" for t in tags)


def _verb_object(param: str) -> Optional[tuple[str, str]]:
    """Split a verb-phrase parameter into (verb token, object phrase) when it
    has the shape VERB + noun phrase."""
    tokens = param.split()
    tags = _tags(param)
    if len(tokens) < 2 or tags[0] != "VERB":
        return None
    rest_tags = tags[1:]
    if "VERB" in rest_tags or not any(t in ("SUBST", "PROPN") for t in rest_tags):
        return None
    return tokens[0], " ".join(tokens[1:])


def seed_and_group(rels: Iterable[RawRelation]) -> list[Relation]:
    """Seed f=1;i=0 on every extracted relation and reconcile equal ones.

    Each distinct (type, params, profile) appears once with f equal to the
    number of grouped sources and the source ids listed in ascending order.
    """
    groups: dict[_GroupKey, list[RawRelation]] = {}
    for raw in rels:
        key = (raw.rtype, raw.param1, raw.param2, raw.profile)
        groups.setdefault(key, []).append(raw)
    out = []
    for (rtype, p1, p2, profile), members in groups.items():
        ids = tuple(sorted({m.statement_id for m in members}))
        out.append(Relation(rtype, p1, p2, f=len(members), i=0, ids=ids,
                            profile=profile))
    return sort_relations(out)


def sort_relations(rels: Iterable[Relation]) -> list[Relation]:
    return sorted(rels, key=lambda r: (r.rtype, r.param1, r.param2,
                                       r.profile.slots() if r.profile else ()))


class _MergeSet:
    """Keyed relation set implementing the derivation merge rule."""

    def __init__(self, rels: Iterable[Relation]):
        self.by_key: dict[_GroupKey, Relation] = {}
        for rel in rels:
            if _group_key(rel) in self.by_key:
                raise ValueError(f"duplicate relation key {_group_key(rel)}")
            self.by_key[_group_key(rel)] = rel
        self.derived = 0
        self.merged = 0

    def add_inferred(self, rtype: str, param1: str, param2: str,
                     profile: Optional[ProfileAttrs], source_ids: Sequence[int]) -> None:
        """Record a derivation: a new relation gets f=0 and one i per source
        id; merging into an existing relation appends only ids not already
        present, incrementing i per appended id."""
        key = (rtype, param1, param2, profile)
        existing = self.by_key.get(key)
        if existing is None:
            ids = tuple(sorted(set(source_ids)))
            self.by_key[key] = Relation(rtype, param1, param2, f=0, i=len(ids),
                                        ids=ids, profile=profile)
            self.derived += 1
            return
        new_ids = [x for x in sorted(set(source_ids)) if x not in existing.ids]
        if not new_ids:
            return
        from dataclasses import replace

        self.by_key[key] = replace(existing, i=existing.i + len(new_ids),
                                   ids=existing.ids + tuple(new_ids))
        self.merged += 1

    def relations(self) -> list[Relation]:
        return sort_relations(self.by_key.values())


def infer_property_of(rels: Iterable[Relation],
                      registry: Optional[TypeRegistry] = None,
                      report: Optional["PassReport"] = None) -> list[Relation]:
    """Derive a PropertyOf from every IsA whose first parameter is a noun or
    noun phrase and whose second is an adjective, keeping profile and ids."""
    registry = registry or default_registry()
    merge = _MergeSet(rels)
    for rel in list(merge.by_key.values()):
        if rel.rtype != IS_A:
            continue
        if _is_noun_phrase(rel.param1) and _is_adjective(rel.param2):
            merge.add_inferred(PROPERTY_OF, rel.param1, rel.param2,
                               rel.profile, rel.ids)
    if report is not None:
        report.record("property_of", merge.derived, merge.merged)
    return merge.relations()


@dataclass(frozen=True)
class HeuristicConfig:
    """Switches for the artifact-defined derivation family.

    These rules extend the recorded IsA-to-PropertyOf inference with
    further connectivity passes; each is independently switchable and all
    but the shared-object k-line rule default to off.
    """

    thematic_kline: bool = True
    capable_of: bool = False
    capable_of_receiving_action: bool = False
    super_thematic_kline: bool = False

    @classmethod
    def none(cls) -> "HeuristicConfig":
        return cls(thematic_kline=False)


@dataclass
class PassReport:
    """Derived/merged counts per heuristic pass."""

    counts: dict[str, tuple[int, int]] = field(default_factory=dict)

    def record(self, name: str, derived: int, merged: int) -> None:
        self.counts[name] = (derived, merged)


def _pair_order(r1: Relation, r2: Relation) -> tuple[Relation, Relation]:
    k = lambda r: (min(r.ids), r.key())
    return (r1, r2) if k(r1) <= k(r2) else (r2, r1)


def _derive_thematic_kline(merge: _MergeSet, registry: TypeRegistry) -> None:
    # Two same-type relations of one profile sharing their second parameter
    # link their subjects: using a computer and using a notebook to study
    # makes "computer" evoke "notebook".
    groups: dict[tuple[str, str, Optional[ProfileAttrs]], list[Relation]] = {}
    for rel in merge.by_key.values():
        rtype = registry.get(rel.rtype)
        if rtype.polarity != "affirmative" or rtype.kline:
            continue
        groups.setdefault((rel.rtype, rel.param2, rel.profile), []).append(rel)
    for members in groups.values():
        members = sorted(members, key=lambda r: (min(r.ids), r.key()))
        for r1, r2 in combinations(members, 2):
            if r1.param1 == r2.param1:
                continue
            event_id = min(min(r1.ids), min(r2.ids))
            merge.add_inferred(THEMATIC_KLINE, r1.param1, r2.param1,
                               r1.profile, (event_id,))


def _derive_capable_of(merge: _MergeSet) -> None:
    # Things afford the use they are put to: UsedFor(x, do y) -> x can do y.
    for rel in list(merge.by_key.values()):
        if rel.rtype != USED_FOR:
            continue
        if _is_noun_phrase(rel.param1) and _tags(rel.param2)[:1] == ["VERB"]:
            merge.add_inferred(CAPABLE_OF, rel.param1, rel.param2,
                               rel.profile, rel.ids)


def _derive_capable_of_receiving(merge: _MergeSet) -> None:
    # A verb-phrase parameter names an action applied to its object:
    # "usar caderno novo" means a new notebook receives the action "usar".
    for rel in list(merge.by_key.values()):
        for param in (rel.param1, rel.param2):
            split = _verb_object(param)
            if split is None:
                continue
            verb, obj = split
            merge.add_inferred(CAPABLE_OF_RECEIVING, obj, verb,
                               rel.profile, rel.ids)


def _derive_super_thematic_kline(merge: _MergeSet) -> None:
    # Chained k-lines generalize: ThematicKLine(a,b) + ThematicKLine(b,c)
    # links a to c one level up.
    klines = [r for r in merge.by_key.values() if r.rtype == THEMATIC_KLINE]
    klines.sort(key=lambda r: (min(r.ids), r.key()))
    for r1, r2 in combinations(klines, 2):
        if r1.profile != r2.profile:
            continue
        ends1, ends2 = {r1.param1, r1.param2}, {r2.param1, r2.param2}
        shared = ends1 & ends2
        if len(shared) != 1:
            continue
        (a,) = ends1 - shared
        (c,) = ends2 - shared
        if a == c:
            continue
        event_id = min(min(r1.ids), min(r2.ids))
        merge.add_inferred(SUPER_THEMATIC_KLINE, a, c, r1.profile, (event_id,))


def apply_family_heuristics(rels: Iterable[Relation],
                            registry: Optional[TypeRegistry] = None,
                            config: HeuristicConfig = HeuristicConfig(),
                            report: Optional[PassReport] = None) -> list[Relation]:
    """Run the enabled derivation passes, each over a frozen snapshot of the
    previous pass's output, merging exactly as infer_property_of does."""
    registry = registry or default_registry()
    current = list(rels)
    passes = [
        ("thematic_kline", config.thematic_kline,
         lambda m: _derive_thematic_kline(m, registry)),
        ("capable_of", config.capable_of, _derive_capable_of),
        ("capable_of_receiving_action", config.capable_of_receiving_action,
         _derive_capable_of_receiving),
        ("super_thematic_kline", config.super_thematic_kline,
         _derive_super_thematic_kline),
    ]
    for name, enabled, run in passes:
        if not enabled:
            continue
        merge = _MergeSet(current)
        run(merge)
        if report is not None:
            report.record(name, merge.derived, merge.merged)
        current = merge.relations()
    return current


def relax(raws: Iterable[RawRelation],
          registry: Optional[TypeRegistry] = None,
          config: HeuristicConfig = HeuristicConfig(),
          report: Optional[PassReport] = None) -> list[Relation]:
    """Full phase: seed and group, derive PropertyOf, run the family passes."""
    registry = registry or default_registry()
    grouped = seed_and_group(raws)
    with_properties = infer_property_of(grouped, registry, report)
    return apply_family_heuristics(with_properties, registry, config, report)
