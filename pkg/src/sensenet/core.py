"""Shared domain types: relation types, relations, profiles, networks, and
their canonical one-line text forms.

Two line grammars exist. The final grammar carries counters only:

    (UsedFor "computer" "study" "f=3;i=2" "1;55;346;550;555")

The intermediate grammar, used between pipeline phases, inserts the five
contributor-profile slots between the second parameter and the counters;
before counters are seeded the line ends at the id slot:

    (UsedFor "computador" "estudar" "M" "18_29" "mestrado" "Clementina" "SP" "1")
    (UsedFor "computador" "estudar" "M" "18_29" "mestrado" "Clementina" "SP" "f=2;i=0" "1;55")

Network files hold one relation per line, UTF-8, LF terminators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Iterable, Iterator, Mapping, Optional, Sequence

AFFIRMATIVE = "affirmative"
NEGATIVE = "negative"

GENDERS = ("M", "F")
AGE_GROUPS = ("lt_12", "13_17", "18_29", "30_45", "46_65", "gt_65")
# Coded school-degree vocabulary; "1"=elementary, "2"=high school,
# "3"=college. Overridable wherever a ProfileVocabulary is accepted.
DEFAULT_EDUCATIONS = (
    "1_incompleto",
    "1_completo",
    "2_incompleto",
    "2_completo",
    "3_incompleto",
    "3_completo",
    "pos_graduacao",
    "mestrado",
    "doutorado",
)


class GrammarError(ValueError):
    """A relation line that does not conform to either line grammar."""


class RegistryError(ValueError):
    """An inconsistent relation-type definition or an unknown type name."""


@dataclass(frozen=True)
class RelationType:
    """A named binary predicate type.

    Negative types name their affirmative counterpart (NotIsA -> IsA).
    K-line types link contexts and carry no negative form.
    """

    name: str
    polarity: str = AFFIRMATIVE
    affirmative_counterpart: Optional[str] = None
    kline: bool = False

    def __post_init__(self) -> None:
        if self.polarity not in (AFFIRMATIVE, NEGATIVE):
            raise RegistryError(f"bad polarity {self.polarity!r} for {self.name!r}")
        if self.polarity == NEGATIVE and not self.affirmative_counterpart:
            raise RegistryError(f"negative type {self.name!r} names no affirmative counterpart")
        if self.polarity == AFFIRMATIVE and self.affirmative_counterpart:
            raise RegistryError(f"affirmative type {self.name!r} must not name a counterpart")


class TypeRegistry:
    """Validated, immutable set of relation types keyed by name."""

    def __init__(self, types: Mapping[str, RelationType]):
        self._types = dict(types)
        self._negative_of = {
            t.affirmative_counterpart: t.name
            for t in self._types.values()
            if t.polarity == NEGATIVE
        }

    def __contains__(self, name: str) -> bool:
        return name in self._types

    def __iter__(self) -> Iterator[RelationType]:
        return iter(self._types.values())

    def __len__(self) -> int:
        return len(self._types)

    def get(self, name: str) -> RelationType:
        try:
            return self._types[name]
        except KeyError:
            raise RegistryError(f"unknown relation type {name!r}") from None

    def negative_of(self, name: str) -> Optional[str]:
        """Name of the negative version of an affirmative type, if any."""
        self.get(name)
        return self._negative_of.get(name)

    def affirmatives(self) -> list[RelationType]:
        return [t for t in self._types.values() if t.polarity == AFFIRMATIVE]

    def extend(self, defs: Iterable[RelationType]) -> "TypeRegistry":
        """New registry with additional types; same validation rules."""
        return register_relation_types(list(self._types.values()) + list(defs))


def register_relation_types(defs: Iterable[RelationType]) -> TypeRegistry:
    """Build a registry, checking name uniqueness and counterpart integrity.

    Every negative type must name an existing affirmative, and k-line types
    must not be given a negative version.
    """
    by_name: dict[str, RelationType] = {}
    for t in defs:
        if t.name in by_name:
            raise RegistryError(f"duplicate relation type name {t.name!r}")
        by_name[t.name] = t
    for t in by_name.values():
        if t.polarity == NEGATIVE:
            counterpart = by_name.get(t.affirmative_counterpart or "")
            if counterpart is None or counterpart.polarity != AFFIRMATIVE:
                raise RegistryError(
                    f"negative type {t.name!r} requires affirmative "
                    f"counterpart {t.affirmative_counterpart!r}"
                )
            if counterpart.kline:
                raise RegistryError(
                    f"k-line type {counterpart.name!r} cannot have negative version {t.name!r}"
                )
    return TypeRegistry(by_name)


def _load_type_defs(text: str) -> list[RelationType]:
    defs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, polarity, counterpart, kline = (line.split("\t") + ["", "", ""])[:4]
        defs.append(
            RelationType(
                name=name,
                polarity=polarity or AFFIRMATIVE,
                affirmative_counterpart=counterpart or None,
                kline=kline == "kline",
            )
        )
    return defs


def load_type_registry(path=None) -> TypeRegistry:
    """Load a registry from a TSV (name, polarity, counterpart, kline).

    Without a path, loads the bundled default set. The registry is plain
    configuration so deployments can grow it to a larger type inventory.
    """
    if path is None:
        text = resources.files("sensenet").joinpath("data/relation_types.tsv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return register_relation_types(_load_type_defs(text))


_DEFAULT_REGISTRY: Optional[TypeRegistry] = None


def default_registry() -> TypeRegistry:
    global _DEFAULT_REGISTRY
    if _DEFAULT_REGISTRY is None:
        _DEFAULT_REGISTRY = load_type_registry()
    return _DEFAULT_REGISTRY


@dataclass(frozen=True)
class ProfileVocabulary:
    """Closed value sets for validated profile slots.

    City and state are free-form strings and are matched by exact value.
    """

    genders: tuple[str, ...] = GENDERS
    age_groups: tuple[str, ...] = AGE_GROUPS
    educations: tuple[str, ...] = DEFAULT_EDUCATIONS


DEFAULT_VOCABULARY = ProfileVocabulary()


@dataclass(frozen=True, order=True)
class ProfileAttrs:
    """Contributor profile attached to statements and intermediate relations."""

    gender: str
    age_group: str
    education: str
    city: str
    state: str

    def __post_init__(self) -> None:
        if self.gender not in GENDERS:
            raise ValueError(f"gender must be one of {GENDERS}, got {self.gender!r}")
        if self.age_group not in AGE_GROUPS:
            raise ValueError(f"age_group must be one of {AGE_GROUPS}, got {self.age_group!r}")

    def validate(self, vocab: ProfileVocabulary = DEFAULT_VOCABULARY) -> None:
        if self.education not in vocab.educations:
            raise ValueError(f"education {self.education!r} not in configured vocabulary")

    def slots(self) -> tuple[str, str, str, str, str]:
        return (self.gender, self.age_group, self.education, self.city, self.state)


@dataclass(frozen=True)
class ProfileQuery:
    """Five allow-lists (genders, age groups, educations, cities, states).

    An empty list at any position accepts every value for that slot.
    Lists are stored sorted and deduplicated, so equal queries have equal
    canonical keys regardless of the order values were supplied in.
    """

    genders: tuple[str, ...] = ()
    age_groups: tuple[str, ...] = ()
    educations: tuple[str, ...] = ()
    cities: tuple[str, ...] = ()
    states: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in ("genders", "age_groups", "educations", "cities", "states"):
            values = getattr(self, name)
            object.__setattr__(self, name, tuple(sorted(set(values))))

    @classmethod
    def match_all(cls) -> "ProfileQuery":
        return cls()

    def as_lists(self) -> list[list[str]]:
        return [list(self.genders), list(self.age_groups), list(self.educations),
                list(self.cities), list(self.states)]

    def canonical_key(self) -> str:
        return "|".join(";".join(vals) for vals in self.as_lists())

    def matches(self, profile: ProfileAttrs) -> bool:
        for allowed, value in zip(self.as_lists(), profile.slots()):
            if allowed and value not in allowed:
                return False
        return True


@dataclass(frozen=True)
class RawRelation:
    """A relation straight out of extraction: profiled, one source id, no
    counters yet."""

    rtype: str
    param1: str
    param2: str
    profile: ProfileAttrs
    statement_id: int

    def key(self) -> tuple[str, str, str]:
        return (self.rtype, self.param1, self.param2)


@dataclass(frozen=True)
class Relation:
    """A weighted binary relation.

    `f` counts direct derivations from uttered statements, `i` counts
    inferred derivations; `ids` lists the originating statement ids.
    `profile` is present through the intermediate pipeline stages and
    dropped once a network is materialized for a profile query.
    """

    rtype: str
    param1: str
    param2: str
    f: int
    i: int
    ids: tuple[int, ...]
    profile: Optional[ProfileAttrs] = None

    def __post_init__(self) -> None:
        if self.f < 0 or self.i < 0:
            raise ValueError(f"negative counters f={self.f} i={self.i}")
        if self.f + self.i < 1:
            raise ValueError("a relation needs at least one derivation (f + i >= 1)")
        if not self.ids:
            raise ValueError("a relation carries at least one statement id")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError(f"duplicate statement ids in {self.ids}")

    def key(self) -> tuple[str, str, str]:
        return (self.rtype, self.param1, self.param2)

    def weight(self) -> int:
        return self.f + self.i

    def with_profile(self, profile: Optional[ProfileAttrs]) -> "Relation":
        return replace(self, profile=profile)


def merge_equal(a: Relation, b: Relation) -> Relation:
    """Reconcile two relations with the same key: counters add, ids union.

    Used when equal relations from different profiles collapse during
    filtering; ids are disjoint there, but the union guards the
    duplicate-free invariant regardless.
    """
    if a.key() != b.key():
        raise ValueError(f"cannot merge distinct keys {a.key()} and {b.key()}")
    ids = tuple(sorted(set(a.ids) | set(b.ids)))
    return Relation(a.rtype, a.param1, a.param2, a.f + b.f, a.i + b.i, ids,
                    profile=a.profile if a.profile == b.profile else None)


_QUOTED = re.compile(r'"([^"]*)"')
_LINE = re.compile(r'\((\S+)((?: "[^"]*")+)\)')
_COUNTERS = re.compile(r"f=(-?\d+);i=(-?\d+)")
_IDS = re.compile(r"-?\d+(?:;-?\d+)*")


def _check_phrase(text: str, what: str) -> str:
    if '"' in text:
        raise GrammarError(f'{what} may not contain a double quote: {text!r}')
    return text


def _parse_counters(slot: str) -> tuple[int, int]:
    m = _COUNTERS.fullmatch(slot)
    if not m:
        raise GrammarError(f"bad counter slot {slot!r}")
    f, i = int(m.group(1)), int(m.group(2))
    if f < 0 or i < 0:
        raise GrammarError(f"negative counters in {slot!r}")
    return f, i


def _parse_ids(slot: str) -> tuple[int, ...]:
    if not _IDS.fullmatch(slot):
        raise GrammarError(f"bad id slot {slot!r}")
    ids = tuple(int(part) for part in slot.split(";"))
    if any(x < 0 for x in ids):
        raise GrammarError(f"negative statement id in {slot!r}")
    return ids


def _split_line(line: str) -> tuple[str, list[str]]:
    m = _LINE.fullmatch(line.rstrip("\n"))
    if not m:
        raise GrammarError(f"malformed relation line: {line!r}")
    return m.group(1), _QUOTED.findall(m.group(2))


def parse_relation_line(line: str, registry: Optional[TypeRegistry] = None) -> Relation:
    """Parse a final (4 quoted slots) or counter-bearing intermediate
    (9 quoted slots) relation line. Round-trips with serialize_relation_line."""
    registry = registry or default_registry()
    rtype, slots = _split_line(line)
    if rtype not in registry:
        raise RegistryError(f"unknown relation type {rtype!r} in line {line!r}")
    if len(slots) == 4:
        p1, p2, counters, ids = slots
        profile = None
    elif len(slots) == 9:
        p1, p2 = slots[0], slots[1]
        profile = ProfileAttrs(*slots[2:7])
        counters, ids = slots[7], slots[8]
    else:
        raise GrammarError(f"expected 4 or 9 quoted slots, found {len(slots)}: {line!r}")
    f, i = _parse_counters(counters)
    return Relation(rtype, p1, p2, f, i, _parse_ids(ids), profile=profile)


def serialize_relation_line(rel: Relation) -> str:
    """One-line text form of a relation; inverse of parse_relation_line."""
    _check_phrase(rel.param1, "param1")
    _check_phrase(rel.param2, "param2")
    ids = ";".join(str(x) for x in rel.ids)
    if rel.profile is None:
        return f'({rel.rtype} "{rel.param1}" "{rel.param2}" "f={rel.f};i={rel.i}" "{ids}")'
    g, a, e, c, s = rel.profile.slots()
    return (
        f'({rel.rtype} "{rel.param1}" "{rel.param2}" "{g}" "{a}" "{e}" "{c}" "{s}" '
        f'"f={rel.f};i={rel.i}" "{ids}")'
    )


def parse_raw_relation_line(line: str, registry: Optional[TypeRegistry] = None) -> RawRelation:
    """Parse an extraction-stage line (8 quoted slots, no counters)."""
    registry = registry or default_registry()
    rtype, slots = _split_line(line)
    if rtype not in registry:
        raise RegistryError(f"unknown relation type {rtype!r} in line {line!r}")
    if len(slots) != 8:
        raise GrammarError(f"expected 8 quoted slots before counters exist, found {len(slots)}")
    ids = _parse_ids(slots[7])
    if len(ids) != 1:
        raise GrammarError(f"extraction lines carry exactly one id, found {slots[7]!r}")
    return RawRelation(rtype, slots[0], slots[1], ProfileAttrs(*slots[2:7]), ids[0])


def serialize_raw_relation_line(rel: RawRelation) -> str:
    _check_phrase(rel.param1, "param1")
    _check_phrase(rel.param2, "param2")
    g, a, e, c, s = rel.profile.slots()
    return (
        f'({rel.rtype} "{rel.param1}" "{rel.param2}" "{g}" "{a}" "{e}" "{c}" "{s}" '
        f'"{rel.statement_id}")'
    )


class ConceptNet:
    """An immutable semantic network of keyed relations.

    At most one relation exists per (rtype, param1, param2); constructing a
    network from relations with colliding keys reconciles them instead of
    duplicating. A node index (concept -> incident relations) is kept in
    step with the relation set. Instances are safe for concurrent reads.
    """

    def __init__(self, relations: Iterable[Relation],
                 profile_query: Optional[ProfileQuery] = None):
        merged: dict[tuple[str, str, str], Relation] = {}
        for rel in relations:
            prior = merged.get(rel.key())
            merged[rel.key()] = rel if prior is None else merge_equal(prior, rel)
        self._by_key = merged
        self._relations = tuple(sorted(merged.values(), key=lambda r: r.key()))
        index: dict[str, list[Relation]] = {}
        for rel in self._relations:
            index.setdefault(rel.param1, []).append(rel)
            if rel.param2 != rel.param1:
                index.setdefault(rel.param2, []).append(rel)
        self._node_index = {node: tuple(rels) for node, rels in index.items()}
        self.profile_query = profile_query or ProfileQuery.match_all()

    @classmethod
    def from_lines(cls, lines: Iterable[str], registry: Optional[TypeRegistry] = None,
                   profile_query: Optional[ProfileQuery] = None) -> "ConceptNet":
        rels = [parse_relation_line(line, registry) for line in lines if line.strip()]
        return cls(rels, profile_query)

    @property
    def relations(self) -> tuple[Relation, ...]:
        return self._relations

    def get(self, rtype: str, param1: str, param2: str) -> Optional[Relation]:
        return self._by_key.get((rtype, param1, param2))

    def nodes(self) -> tuple[str, ...]:
        return tuple(self._node_index)

    def incident(self, concept: str) -> tuple[Relation, ...]:
        return self._node_index.get(concept, ())

    def degree(self, concept: str) -> int:
        return len(self.incident(concept))

    def __len__(self) -> int:
        return len(self._relations)

    def __contains__(self, concept: str) -> bool:
        return concept in self._node_index

    def to_lines(self) -> list[str]:
        return [serialize_relation_line(rel) for rel in self._relations]


@dataclass(frozen=True)
class NetworkMetrics:
    nodes: int
    relations: int
    density: float


def compute_density(net: ConceptNet) -> NetworkMetrics:
    """Node/relation counts and average nodal edge-density.

    Density is fixed here as 2*relations/nodes (every relation contributes
    an edge end to each of its two parameters); an empty network has
    density 0.
    """
    nodes = len(net.nodes())
    relations = len(net)
    density = (2.0 * relations / nodes) if nodes else 0.0
    return NetworkMetrics(nodes=nodes, relations=relations, density=density)
