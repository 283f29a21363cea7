"""Backend for the secret-word quiz: a seven-step editor wizard that builds
game instances with knowledge-base clue suggestions, and a player loop of
dice roll, clue reveal, and guessing.

Both activities feed statements back into the store: the editor's secret
word and synonyms enter as "is also known as" statements (all pairings),
edited or authored clues enter as new contributions, and every guess is
recorded against each clue revealed at guess time. A guess that matches
neither the secret word nor a synonym is "open", never incorrect.
"""

from __future__ import annotations

import random
import threading
import uuid
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core import ProfileAttrs, ProfileQuery, RelationType, TypeRegistry, \
    default_registry
from .filtering import Materializer, parse_profile_query
from .inference import (RenderTemplates, default_templates, display_node,
                        get_context, render_sentence)
from .normalization import MorphologyProvider, normalize_phrase, strip_tags
from .store import RenderedTemplate, StatementStore, Statement, Template

TRANSVERSAL_THEMES = (
    "sexual education",
    "ethics",
    "healthcare",
    "environment",
    "cultural plurality",
    "market and consumers",
)

MAX_TOPICS = 6
MAX_CLUES = 10

CLUE_SOURCES = ("suggested", "edited", "authored")

SYNONYM_ACTIVITY = "game_synonyms"
PLAY_ACTIVITY = "game_play"
CLUE_ACTIVITY = "game_clues"

CONCEPTUALLY_RELATED = "ConceptuallyRelatedTo"

GAME_RELATION_TYPES = (
    RelationType(CONCEPTUALLY_RELATED),
    RelationType("NotConceptuallyRelatedTo", "negative", CONCEPTUALLY_RELATED),
)

OUTCOME_CORRECT = "correct"
OUTCOME_OPEN = "open"


class GameError(ValueError):
    pass


@dataclass(frozen=True)
class Clue:
    text: str
    source: str

    def __post_init__(self) -> None:
        if self.source not in CLUE_SOURCES:
            raise GameError(f"clue source must be one of {CLUE_SOURCES}")
        if not self.text.strip():
            raise GameError("clue text must be non-empty")


@dataclass
class Card:
    id: str
    topic: str
    secret_word: str
    synonyms: tuple[str, ...]
    clues: list[Clue] = field(default_factory=list)

    def validate(self) -> None:
        if not 1 <= len(self.clues) <= MAX_CLUES:
            raise GameError(
                f"card {self.secret_word!r} needs 1 to {MAX_CLUES} clues, "
                f"has {len(self.clues)}")
        secret = self.secret_word.lower()
        for clue in self.clues:
            if secret in clue.text.lower():
                raise GameError(
                    f"clue {clue.text!r} reveals the secret word {self.secret_word!r}")


@dataclass
class GameInstance:
    id: str
    editor_profile: ProfileAttrs
    step_completed: int = 0
    profile_query: Optional[ProfileQuery] = None
    theme: Optional[str] = None
    topics: tuple[str, ...] = ()
    cards: dict[str, Card] = field(default_factory=dict)
    published: bool = False

    @property
    def state(self) -> str:
        return "published" if self.published else f"draft(step {self.step_completed})"

    def cards_for(self, topic: str) -> list[Card]:
        return [c for c in self.cards.values() if c.topic == topic]


@dataclass
class GuessRecord:
    text: str
    revealed_at_time: tuple[int, ...]
    outcome: str


@dataclass
class PlaySession:
    id: str
    game_id: str
    player_profile: ProfileAttrs
    topic: Optional[str] = None
    card_id: Optional[str] = None
    revealed: list[int] = field(default_factory=list)
    guesses: list[GuessRecord] = field(default_factory=list)
    solved: bool = False


@dataclass(frozen=True)
class ClueSuggestion:
    sentence: str
    relation_line: str
    weight: int


def _game_templates() -> list[Template]:
    return [
        Template(SYNONYM_ACTIVITY, "___ is also known as {dyn}", CONCEPTUALLY_RELATED),
        Template(PLAY_ACTIVITY, "___ — {dyn}", CONCEPTUALLY_RELATED),
        Template(CLUE_ACTIVITY, "___", CONCEPTUALLY_RELATED),
    ]


class GameService:
    """Wizard, suggestion, and play-session logic over shared backends.

    Suggestion lookups never block the editor: an empty suggestion list
    just means the editor authors the clues by hand.
    """

    def __init__(self, store: StatementStore, materializer: Materializer,
                 provider: MorphologyProvider,
                 registry: Optional[TypeRegistry] = None,
                 templates: Optional[RenderTemplates] = None,
                 rng: Optional[random.Random] = None,
                 min_reveals_for_guess: int = 1):
        self.store = store
        self.materializer = materializer
        self.provider = provider
        self.registry = (registry or default_registry()).extend(GAME_RELATION_TYPES)
        self.templates = (templates or default_templates()).with_pattern(
            CONCEPTUALLY_RELATED, "{1} makes one think of {2}")
        self.rng = rng or random.Random()
        self.min_reveals_for_guess = min_reveals_for_guess
        self.games: dict[str, GameInstance] = {}
        self.sessions: dict[str, PlaySession] = {}
        self._lock = threading.RLock()
        existing = set(self.store.activities)
        for template in _game_templates():
            if template.activity not in existing:
                self.store.add_template(template)

    # -- editor wizard -------------------------------------------------------

    def create_game(self, editor_profile: ProfileAttrs) -> GameInstance:
        with self._lock:
            game = GameInstance(id=uuid.uuid4().hex[:12],
                                editor_profile=editor_profile)
            self.games[game.id] = game
            return game

    def get_game(self, game_id: str) -> GameInstance:
        try:
            return self.games[game_id]
        except KeyError:
            raise GameError(f"no game {game_id!r}") from None

    def wizard_advance(self, game_id: str, step: int, payload: dict) -> GameInstance:
        """Apply one wizard step; steps must arrive in order 1 to 7.

        Step 1 fixes the population profile and materializes its network,
        2 the theme, 3 the dice topics, 4 the secret words and synonyms,
        5 the clue set per card, 6 review, 7 validation and publication.
        """
        with self._lock:
            game = self.get_game(game_id)
            if game.published:
                raise GameError("game already published")
            if step != game.step_completed + 1:
                raise GameError(
                    f"out-of-order step {step}, expected {game.step_completed + 1}")
            handler = getattr(self, f"_step_{step}")
            handler(game, payload or {})
            game.step_completed = step
            return game

    def _step_1(self, game: GameInstance, payload: dict) -> None:
        query = parse_profile_query(payload["profile_query"],
                                    self.store.vocabulary)
        game.profile_query = query
        self.materializer.materialize(query)

    def _step_2(self, game: GameInstance, payload: dict) -> None:
        theme = payload.get("theme", "")
        if theme not in TRANSVERSAL_THEMES:
            raise GameError(
                f"theme {theme!r} is not one of the transversal themes "
                f"{TRANSVERSAL_THEMES}")
        game.theme = theme

    def _step_3(self, game: GameInstance, payload: dict) -> None:
        topics = [t.strip() for t in payload.get("topics", []) if t.strip()]
        if not 1 <= len(topics) <= MAX_TOPICS:
            raise GameError(f"between 1 and {MAX_TOPICS} topics required")
        if len(set(topics)) != len(topics):
            raise GameError("topics must be distinct")
        game.topics = tuple(topics)

    def _step_4(self, game: GameInstance, payload: dict) -> None:
        cards = payload.get("cards", [])
        if not cards:
            raise GameError("at least one secret word is required")
        for spec in cards:
            topic = spec["topic"]
            if topic not in game.topics:
                raise GameError(f"unknown topic {topic!r}")
            secret = spec["secret_word"].strip()
            if not secret:
                raise GameError("secret word must be non-empty")
            synonyms = tuple(s.strip() for s in spec.get("synonyms", []) if s.strip())
            card = Card(id=uuid.uuid4().hex[:12], topic=topic,
                        secret_word=secret, synonyms=synonyms)
            game.cards[card.id] = card
            if synonyms:
                self.record_synonyms(secret, synonyms, game.editor_profile)

    def _step_5(self, game: GameInstance, payload: dict) -> None:
        for card_id, clue_specs in payload.get("clues", {}).items():
            if card_id not in game.cards:
                raise GameError(f"unknown card {card_id!r}")
            card = game.cards[card_id]
            card.clues = [Clue(spec["text"], spec["source"]) for spec in clue_specs]
            card.validate()
            for clue in card.clues:
                if clue.source in ("edited", "authored"):
                    self._store_clue_statement(clue.text, game.editor_profile)

    def _step_6(self, game: GameInstance, payload: dict) -> None:
        # Review step: nothing to persist, the editor re-reads the draft.
        return

    def _step_7(self, game: GameInstance, payload: dict) -> None:
        if not game.topics:
            raise GameError("cannot publish without topics")
        for topic in game.topics:
            cards = game.cards_for(topic)
            if not cards:
                raise GameError(f"topic {topic!r} has no card")
        for card in game.cards.values():
            card.validate()
        game.published = True

    def _store_clue_statement(self, text: str, profile: ProfileAttrs) -> Statement:
        template = self.store.templates_for(CLUE_ACTIVITY)[0]
        return self.store.submit_statement(template, text, profile)

    # -- suggestions ---------------------------------------------------------

    def _resolve_nodes(self, net, term: str) -> list[str]:
        wanted = {term, term.lower()}
        lemmas = " ".join(t.lemma for t in normalize_phrase(term.lower(), self.provider))
        wanted.add(lemmas)
        return [node for node in net.nodes() if strip_tags(node) in wanted]

    def suggest_clues(self, secret_word: str, synonyms: Sequence[str],
                      query: ProfileQuery) -> list[ClueSuggestion]:
        """Statements about the secret word and its synonyms, rendered from
        the relations around them, heaviest (f+i) first.

        No hits is a normal outcome; the editor simply writes clues by hand.
        """
        from .core import serialize_relation_line

        net = self.materializer.materialize(query).net
        seen = set()
        suggestions = []
        for term in [secret_word, *synonyms]:
            for node in self._resolve_nodes(net, term):
                for rel, _, _ in display_node(node, net, self.templates, self.registry):
                    if rel.key() in seen:
                        continue
                    seen.add(rel.key())
                    sentence = render_sentence(rel, self.templates, self.registry,
                                               capitalize=True)
                    suggestions.append(ClueSuggestion(
                        sentence, serialize_relation_line(rel), rel.weight()))
        suggestions.sort(key=lambda s: (-s.weight, s.sentence))
        return suggestions

    def related_concepts(self, secret_word: str, synonyms: Sequence[str],
                         query: ProfileQuery) -> list[str]:
        """Context expansion around the secret word, for editor exploration."""
        net = self.materializer.materialize(query).net
        seeds = []
        for term in [secret_word, *synonyms]:
            seeds.extend(self._resolve_nodes(net, term))
        if not seeds:
            return []
        return [sc.concept for sc in get_context(seeds, net)]

    def record_synonyms(self, secret_word: str, synonyms: Sequence[str],
                        editor_profile: ProfileAttrs) -> list[Statement]:
        """Store "is also known as" statements for the secret word with each
        synonym and for every unordered synonym pair."""
        synonyms = list(synonyms)
        if not synonyms:
            raise GameError("at least one synonym is required")
        if len(set(synonyms)) != len(synonyms):
            raise GameError("synonyms must be distinct")
        template = self.store.templates_for(SYNONYM_ACTIVITY)[0]
        stored = []
        for synonym in synonyms:
            stored.append(self.store.submit_statement(
                RenderedTemplate(template, synonym, None), secret_word,
                editor_profile))
        for i, first in enumerate(synonyms):
            for second in synonyms[i + 1:]:
                stored.append(self.store.submit_statement(
                    RenderedTemplate(template, second, None), first,
                    editor_profile))
        return stored

    # -- player loop -----------------------------------------------------------

    def start_session(self, game_id: str, player_profile: ProfileAttrs) -> PlaySession:
        with self._lock:
            game = self.get_game(game_id)
            if not game.published:
                raise GameError("game is not published")
            session = PlaySession(id=uuid.uuid4().hex[:12], game_id=game_id,
                                  player_profile=player_profile)
            self.sessions[session.id] = session
            return session

    def get_session(self, session_id: str) -> PlaySession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise GameError(f"no session {session_id!r}") from None

    def roll_dice(self, game_id: str) -> str:
        """Uniformly random topic among a published game's dice faces."""
        game = self.get_game(game_id)
        if not game.published:
            raise GameError("game is not published")
        return self.rng.choice(list(game.topics))

    def roll(self, session_id: str) -> tuple[str, Card]:
        """Roll the dice for a session and deal a card of the rolled topic."""
        with self._lock:
            session = self.get_session(session_id)
            game = self.get_game(session.game_id)
            topic = self.roll_dice(session.game_id)
            card = self.rng.choice(game.cards_for(topic))
            session.topic = topic
            session.card_id = card.id
            session.revealed = []
            session.guesses = []
            session.solved = False
            return topic, card

    def _session_card(self, session: PlaySession) -> Card:
        if session.card_id is None:
            raise GameError("roll the dice before playing")
        return self.get_game(session.game_id).cards[session.card_id]

    def reveal_clue(self, session_id: str, index: int) -> str:
        """Reveal one clue by its 1-based position; no repeats."""
        with self._lock:
            session = self.get_session(session_id)
            card = self._session_card(session)
            if not 1 <= index <= len(card.clues):
                raise GameError(
                    f"clue index {index} out of range 1..{len(card.clues)}")
            if index in session.revealed:
                raise GameError(f"clue {index} already revealed")
            session.revealed.append(index)
            return card.clues[index - 1].text

    def _normalize_answer(self, text: str) -> str:
        return " ".join(t.lemma for t in normalize_phrase(text.lower(), self.provider))

    def submit_guess(self, session_id: str, guess: str) -> str:
        """Compare a guess against the secret word and synonyms.

        Matching is case- and inflection-insensitive. A non-matching guess
        leaves the card open (it is never judged incorrect), and either way
        the pairing of the guess with every clue revealed so far is stored
        as collected knowledge attributed to the player.
        """
        if not guess or not guess.strip():
            raise GameError("guess must be non-empty")
        with self._lock:
            session = self.get_session(session_id)
            card = self._session_card(session)
            if len(session.revealed) < self.min_reveals_for_guess:
                raise GameError(
                    f"reveal at least {self.min_reveals_for_guess} clue(s) first")
            normalized = self._normalize_answer(guess)
            answers = {self._normalize_answer(card.secret_word)}
            answers.update(self._normalize_answer(s) for s in card.synonyms)
            outcome = OUTCOME_CORRECT if normalized in answers else OUTCOME_OPEN
            session.guesses.append(GuessRecord(
                guess.strip(), tuple(session.revealed), outcome))
            if outcome == OUTCOME_CORRECT:
                session.solved = True
            template = self.store.templates_for(PLAY_ACTIVITY)[0]
            for index in session.revealed:
                clue_text = card.clues[index - 1].text
                self.store.submit_statement(
                    RenderedTemplate(template, clue_text, None), guess.strip(),
                    session.player_profile)
            return outcome

    def collection_records(self) -> list[Statement]:
        return [s for s in self.store.statements() if s.activity == PLAY_ACTIVITY]
