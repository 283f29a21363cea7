"""Walk a four-statement corpus through every generation phase, printing the
line format each stage reads and writes."""

from sensenet import compute_density
from sensenet.core import serialize_raw_relation_line, serialize_relation_line
from sensenet.extraction import load_rules
from sensenet.filtering import build_conceptnet, parse_profile_query
from sensenet.normalization import NormalizationStats, load_lexicon
from sensenet.pipeline import Pipeline
from sensenet.relaxation import PassReport

CORPUS = [
    "Um(a) computador é usado(a) para estudar$$M$$18_29$$mestrado$$Clementina$$SP$$1",
    "Um(a) computador é usado(a) para jogar$$M$$13_17$$2_incompleto$$São Carlos$$SP$$25",
    "Você geralmente encontra um(a) computador em uma mesa de escritório$$F$$18_29$$mestrado$$Campinas$$SP$$8",
    "Pessoas usam cadernos novos quando elas começam a estudar$$M$$13_17$$2_incompleto$$São Carlos$$SP$$265",
]

pipe = Pipeline(rules=load_rules(bundled="pt"), provider=load_lexicon(bundled="pt"))

print("== exported corpus (seven $$-separated slots per line) ==")
for line in CORPUS:
    print(line)

raws = pipe.extract(CORPUS)
print("\n== extraction: profiled binary relations ==")
for raw in raws:
    print(serialize_raw_relation_line(raw))

stats = NormalizationStats()
normalized = pipe.normalize_raws(raws, stats)
print("\n== normalization: tagged, article-free, lemmatized parameters ==")
for raw in normalized:
    print(serialize_raw_relation_line(raw))
print("stats:", stats.report())

report = PassReport()
relaxed = pipe.relax_raws(normalized, report)
print("\n== relaxation: counters seeded, equals grouped, inferences merged ==")
for rel in relaxed:
    print(serialize_relation_line(rel))
print("pass report:", report.counts)

print("\n== filtering: one network per profile query ==")
for lists in ([[], [], [], [], []], [["F"], [], [], [], []]):
    query = parse_profile_query(lists)
    net = build_conceptnet(query, relaxed)
    metrics = compute_density(net)
    print(f"query {lists}: {metrics.relations} relations, "
          f"{metrics.nodes} nodes, density {metrics.density:.3f}")
    for line in net.to_lines():
        print("   ", line)
