"""Scripted editor wizard and player session, in process, showing the
knowledge flowing back into the statement store."""

import random
import tempfile

from sensenet.core import Relation, ProfileAttrs
from sensenet.filtering import Materializer
from sensenet.game import GameService
from sensenet.normalization import load_lexicon
from sensenet.store import StatementStore, load_templates

editor = ProfileAttrs("F", "30_45", "doutorado", "São Carlos", "SP")
player = ProfileAttrs("M", "13_17", "2_incompleto", "São Carlos", "SP")

relaxed = [
    Relation("IsA", "aids", "sexually transmitted disease", 2, 0, (1, 2),
             ProfileAttrs("M", "18_29", "mestrado", "Clementina", "SP")),
]

store = StatementStore(load_templates(bundled="en"), rng=random.Random(1))
service = GameService(store, Materializer(relaxed, tempfile.mkdtemp()),
                      load_lexicon(bundled="en"), rng=random.Random(2))

game = service.create_game(editor)
service.wizard_advance(game.id, 1, {"profile_query": [[], [], [], [], []]})
service.wizard_advance(game.id, 2, {"theme": "sexual education"})
service.wizard_advance(game.id, 3, {"topics": ["Sexually transmitted diseases"]})
service.wizard_advance(game.id, 4, {"cards": [{
    "topic": "Sexually transmitted diseases",
    "secret_word": "aids", "synonyms": ["sida"],
}]})

suggestions = service.suggest_clues("aids", ["sida"], game.profile_query)
print("suggested clues:")
for s in suggestions:
    print("  -", s.sentence)

(card_id,) = service.get_game(game.id).cards
service.wizard_advance(game.id, 5, {"clues": {card_id: [
    {"text": suggestions[0].sentence.replace("Aids", "It"), "source": "edited"},
    {"text": "You read about it in health class", "source": "authored"},
]}})
service.wizard_advance(game.id, 6, {})
service.wizard_advance(game.id, 7, {})
print("\ngame state:", service.get_game(game.id).state)

session = service.start_session(game.id, player)
topic, card = service.roll(session.id)
print(f"\ndice rolled: {topic} ({len(card.clues)} clues)")
print("clue 1:", service.reveal_clue(session.id, 1))
print("guess 'hiv' ->", service.submit_guess(session.id, "hiv"))
print("clue 2:", service.reveal_clue(session.id, 2))
print("guess 'sida' ->", service.submit_guess(session.id, "sida"))

print("\nstatements collected during the session:")
for statement in store.statements():
    print(f"  [{statement.activity}] #{statement.id}: {statement.text}")
