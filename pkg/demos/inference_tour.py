"""Tour of the inference operations over a small hand-built network."""

from sensenet.core import ConceptNet, Relation
from sensenet.inference import (decompose_phrases, display_node, expand_query,
                                get_analogy, get_context)
from sensenet.normalization import load_lexicon


def rel(rtype, p1, p2, f=1, i=0, ids=(1,)):
    return Relation(rtype, p1, p2, f, i, tuple(ids))


net = ConceptNet([
    rel("UsedFor", "computer", "study", f=3, i=2, ids=(1, 55, 346, 550, 555)),
    rel("UsedFor", "notebook", "study", ids=(45,)),
    rel("LocationOf", "computer", "desk", ids=(8,)),
    rel("IsA", "computer", "machine", ids=(9,)),
    rel("PropertyOf", "machine", "expensive", ids=(12,)),
])

print("== get_context('computer') ==")
for sc in get_context("computer", net):
    print(f"  {sc.score:8.4f}  {sc.concept}")

print("\n== display_node('study') ==")
for relation, sentence, ids in display_node("study", net):
    print(f"  {sentence!r}  <- statements {ids}")

print("\n== get_analogy: sun/moon ==")
base = ConceptNet([rel("IsA", "sun", "star", ids=(1,)),
                   rel("LocationOf", "sun", "sky", ids=(2,))])
target = ConceptNet([rel("IsA", "moon", "satellite", ids=(3,)),
                     rel("LocationOf", "moon", "sky", ids=(4,))])
for corr in get_analogy(base, target):
    marker = "literal" if corr.is_literal else "mapped"
    print(f"  {corr.base_concept} <-> {corr.target_concept} "
          f"(systematicity {corr.systematicity}, {marker})")

print("\n== expand_query('studies') ==")
en = load_lexicon(bundled="en")
print(" ", expand_query("studies", net, en))

print("\n== decompose_phrases('preventing work accidents') ==")
print(" ", decompose_phrases("preventing work accidents", en))
