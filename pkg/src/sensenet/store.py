"""Statement collection: templates, contributor submissions, the feedback
process that recycles approved contributions into new templates, the review
workflow, and the seven-slot corpus export.

Review is deliberately narrow. Reviewers never judge meaning; a statement
can only be discarded for misspelling, and rejecting one requires an
attached spelling-validation failure record.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional, Sequence, Union

from .core import ProfileAttrs, ProfileVocabulary, DEFAULT_VOCABULARY
from .extraction import EXPORT_SEPARATOR, ExportLine

BLANK = "___"
DYN_SLOT = "{dyn}"

PENDING = "pending"
APPROVED = "approved_for_feedback"
REJECTED = "rejected_misspelled"

APPROVE = "approve"
REJECT_MISSPELLED = "reject_misspelled"


class StoreError(ValueError):
    pass


@dataclass(frozen=True)
class Template:
    """A semi-structured sentence with one contributor blank (`___`) and at
    most one dynamic slot (`{dyn}`) filled by the feedback process."""

    activity: str
    static_text: str
    relation_hint: str
    domain: Optional[str] = None

    def __post_init__(self) -> None:
        if self.static_text.count(BLANK) != 1:
            raise StoreError(
                f"template needs exactly one {BLANK} blank: {self.static_text!r}")
        if self.static_text.count(DYN_SLOT) > 1:
            raise StoreError(
                f"template allows at most one {DYN_SLOT} slot: {self.static_text!r}")

    @property
    def has_dynamic_slot(self) -> bool:
        return DYN_SLOT in self.static_text

    def render(self, filler: str, dynamic_filler: Optional[str] = None) -> str:
        text = self.static_text.replace(BLANK, filler)
        if self.has_dynamic_slot:
            if dynamic_filler is None:
                raise StoreError(f"dynamic slot unfilled in {self.static_text!r}")
            text = text.replace(DYN_SLOT, dynamic_filler)
        return text


@dataclass(frozen=True)
class RenderedTemplate:
    """A template whose dynamic slot was filled, ready to show a contributor.

    The filler traces back to an approved statement, or to the configured
    seed list when the store cannot supply one (source_statement_id None).
    """

    template: Template
    dynamic_filler: Optional[str]
    source_statement_id: Optional[int]

    def display_text(self) -> str:
        text = self.template.static_text
        if self.template.has_dynamic_slot:
            text = text.replace(DYN_SLOT, self.dynamic_filler or "")
        return text


@dataclass(frozen=True)
class SpellingEvidence:
    """Tokens that failed lexicon membership during spelling validation."""

    misspelled: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.misspelled:
            raise StoreError("spelling evidence must name at least one token")


@dataclass
class Statement:
    id: int
    text: str
    profile: ProfileAttrs
    activity: str
    filler: str
    review: str = PENDING
    rejection_evidence: Optional[SpellingEvidence] = None


def spell_check(text: str, provider) -> Optional[SpellingEvidence]:
    """Lexicon-membership check via a morphology provider.

    Out-of-lexicon capitalized tokens pass as proper names; tokens with
    non-letter characters (template scaffolding like "a(n)") are skipped.
    """
    misses = tuple(
        t.surface for t in provider.tag(text)
        if t.tag == "OTHER" and t.surface.isalpha()
    )
    return SpellingEvidence(misses) if misses else None


def load_templates(path=None, bundled: Optional[str] = None) -> list[Template]:
    """Template definition file: activity, static text, relation hint, and an
    optional domain tag, tab-separated."""
    if bundled is not None:
        text = resources.files("sensenet").joinpath(f"data/templates_{bundled}.tsv").read_text("utf-8")
    elif path is not None:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise ValueError("either path or bundled is required")
    templates = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        activity, static_text, hint = parts[0], parts[1], parts[2]
        domain = parts[3] if len(parts) > 3 and parts[3] else None
        templates.append(Template(activity, static_text, hint, domain))
    return templates


class StatementStore:
    """Thread-safe statement repository with a single-writer contract.

    Ids increase strictly with insertion order; export takes a consistent
    snapshot under the writer lock.
    """

    def __init__(self, templates: Iterable[Template] = (),
                 seed_words: Sequence[str] = (),
                 vocabulary: ProfileVocabulary = DEFAULT_VOCABULARY,
                 rng: Optional[random.Random] = None):
        self._lock = threading.RLock()
        self._templates: dict[str, list[Template]] = {}
        self._statements: dict[int, Statement] = {}
        self._filler_uses: dict[str, int] = {}
        self._next_id = 1
        self.seed_words = list(seed_words)
        self.vocabulary = vocabulary
        self._rng = rng or random.Random()
        for t in templates:
            self.add_template(t)

    def add_template(self, template: Template) -> None:
        with self._lock:
            self._templates.setdefault(template.activity, []).append(template)

    @property
    def activities(self) -> list[str]:
        return sorted(self._templates)

    def templates_for(self, activity: str) -> list[Template]:
        try:
            return list(self._templates[activity])
        except KeyError:
            raise StoreError(f"unknown activity {activity!r}") from None

    def __len__(self) -> int:
        return len(self._statements)

    def get(self, statement_id: int) -> Statement:
        try:
            return self._statements[statement_id]
        except KeyError:
            raise StoreError(f"no statement with id {statement_id}") from None

    def statements(self) -> list[Statement]:
        with self._lock:
            return [self._statements[i] for i in sorted(self._statements)]

    def submit_statement(self, template: Union[Template, RenderedTemplate],
                         filler: str, profile: ProfileAttrs) -> Statement:
        """Store a contribution as a fresh pending statement.

        The full text is the template with the contributor blank and the
        dynamic slot substituted. The export delimiter `$$` is reserved and
        refused anywhere in the resulting text.
        """
        dynamic_filler = None
        source = template
        if isinstance(template, RenderedTemplate):
            dynamic_filler = template.dynamic_filler
            source = template.template
        if not filler or not filler.strip():
            raise StoreError("filler must be non-empty")
        profile.validate(self.vocabulary)
        with self._lock:
            if source.activity not in self._templates:
                raise StoreError(f"unknown activity {source.activity!r}")
            text = source.render(filler.strip(), dynamic_filler)
            if EXPORT_SEPARATOR in text:
                raise StoreError(
                    f"statement may not contain the reserved delimiter {EXPORT_SEPARATOR!r}")
            statement = Statement(
                id=self._next_id, text=text, profile=profile,
                activity=source.activity, filler=filler.strip(),
            )
            self._statements[statement.id] = statement
            self._next_id += 1
            return statement

    def _approved_fillers(self) -> list[tuple[str, Optional[int]]]:
        seen = {}
        for s in self.statements():
            if s.review == APPROVED and s.filler not in seen:
                seen[s.filler] = s.id
        return list(seen.items())

    def next_template(self, activity: str) -> RenderedTemplate:
        """Render a template of an activity, filling the dynamic slot from an
        approved contribution.

        Fillers are drawn with probability inversely weighted by how often
        each was already used, so presented templates stay varied; with no
        approved statement available, the configured seed list stands in.
        """
        with self._lock:
            templates = self.templates_for(activity)
            template = self._rng.choice(templates)
            if not template.has_dynamic_slot:
                return RenderedTemplate(template, None, None)
            candidates = self._approved_fillers()
            if candidates:
                weights = [1.0 / (1 + self._filler_uses.get(f, 0)) for f, _ in candidates]
                filler, source_id = self._rng.choices(candidates, weights=weights)[0]
            elif self.seed_words:
                filler, source_id = self._rng.choice(self.seed_words), None
            else:
                raise StoreError(
                    f"no approved filler or seed word available for {activity!r}")
            self._filler_uses[filler] = self._filler_uses.get(filler, 0) + 1
            return RenderedTemplate(template, filler, source_id)

    def review_statement(self, statement_id: int, decision: str,
                         evidence: Optional[SpellingEvidence] = None) -> Statement:
        """Approve a pending statement for feedback, or discard it for
        misspelling. Rejection without spelling evidence is refused: review
        never encodes a judgment about meaning."""
        with self._lock:
            statement = self.get(statement_id)
            if statement.review != PENDING:
                raise StoreError(f"statement {statement_id} already reviewed")
            if decision == APPROVE:
                statement.review = APPROVED
            elif decision == REJECT_MISSPELLED:
                if evidence is None:
                    raise StoreError(
                        "rejection requires a spelling-validation failure record")
                statement.review = REJECTED
                statement.rejection_evidence = evidence
            else:
                raise StoreError(f"unknown review decision {decision!r}")
            return statement

    def export_corpus(self) -> list[str]:
        """Seven-slot export lines for every non-rejected statement, ordered
        by ascending id."""
        with self._lock:
            return [
                ExportLine(s.text, s.profile, s.id).serialize()
                for s in self.statements()
                if s.review != REJECTED
            ]

    def import_corpus(self, lines: Iterable[str], activity: str = "imported") -> int:
        """Load previously exported lines back into the store."""
        count = 0
        with self._lock:
            self._templates.setdefault(activity, [])
            for line in lines:
                if not line.strip():
                    continue
                export = ExportLine.parse(line)
                if export.statement_id in self._statements:
                    raise StoreError(f"duplicate statement id {export.statement_id}")
                self._statements[export.statement_id] = Statement(
                    id=export.statement_id, text=export.text,
                    profile=export.profile, activity=activity, filler="",
                )
                self._next_id = max(self._next_id, export.statement_id + 1)
                count += 1
        return count
