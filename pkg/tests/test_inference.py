import math
import random
from itertools import permutations

import pytest

from sensenet.core import ConceptNet, ProfileQuery, Relation
from sensenet.extraction import NEGATION_LEXICONS, extract, load_rules
from sensenet.inference import (Correspondence, RenderTemplates, ScoredConcept,
                                aligned_pairs, decompose_phrases, display_node,
                                default_templates, expand_query, get_analogy,
                                get_context, render_sentence)
from sensenet.normalization import load_lexicon


def rel(rtype, p1, p2, f=1, i=0, ids=(1,)):
    return Relation(rtype, p1, p2, f, i, tuple(ids))


def random_net(rng, max_relations=30, nodes=None):
    nodes = nodes or [f"n{k}" for k in range(rng.randrange(3, 10))]
    types = ["IsA", "UsedFor", "PropertyOf", "LocationOf"]
    rels = {}
    for sid in range(1, rng.randrange(2, max_relations + 1)):
        p1, p2 = rng.sample(nodes, 2)
        key = (rng.choice(types), p1, p2)
        if key in rels:
            continue
        f, i = rng.randrange(0, 4), rng.randrange(0, 3)
        if f + i == 0:
            f = 1
        rels[key] = Relation(*key, f=f, i=i, ids=(sid,))
    return ConceptNet(rels.values())


# -- independent spreading-activation oracle ---------------------------------

def oracle_weights(net):
    weights = {}
    for r in net.relations:
        if r.param1 == r.param2:
            continue
        pair = frozenset((r.param1, r.param2))
        weights[pair] = weights.get(pair, 0.0) + math.log(1 + r.f + r.i)
    return weights


def oracle_scores(seed, net, depth, decay):
    weights = oracle_weights(net)
    nodes = list(net.nodes())
    if seed not in nodes:
        return {}
    scores = {}
    others = [n for n in nodes if n != seed]
    for length in range(1, depth + 1):
        for path in permutations(others, length):
            sequence = (seed,) + path
            product = 1.0
            for a, b in zip(sequence, sequence[1:]):
                w = weights.get(frozenset((a, b)), 0.0)
                product *= w
                if product == 0.0:
                    break
            if product > 0.0:
                target = sequence[-1]
                scores[target] = scores.get(target, 0.0) + \
                    product * decay ** (length - 1)
    return scores


def oracle_context(seeds, net, depth, decay):
    per_seed = [oracle_scores(s, net, depth, decay) for s in seeds]
    totals = {}
    for scores in per_seed:
        for concept, value in scores.items():
            totals[concept] = totals.get(concept, 0.0) + value
    if len(seeds) > 1:
        for concept in totals:
            if all(sc.get(concept, 0.0) > 0 for sc in per_seed):
                totals[concept] *= 2.0
    for seed in seeds:
        totals.pop(seed, None)
    return totals


class TestGetContext:
    def test_depth_validation(self):
        with pytest.raises(ValueError):
            get_context("a", ConceptNet([rel("IsA", "a", "b")]), depth=0)

    def test_isolated_node_empty(self):
        net = ConceptNet([rel("IsA", "a", "b")])
        assert get_context("z", net) == []

    def test_seed_excluded(self):
        net = ConceptNet([rel("IsA", "a", "b"), rel("IsA", "b", "a")])
        concepts = [sc.concept for sc in get_context("a", net)]
        assert "a" not in concepts and "b" in concepts

    def test_scores_sorted_descending(self):
        rng = random.Random(1)
        net = random_net(rng)
        out = get_context(net.nodes()[0], net, depth=3)
        scores = [sc.score for sc in out]
        assert scores == sorted(scores, reverse=True)

    def test_single_edge_score(self):
        net = ConceptNet([rel("UsedFor", "a", "b", f=3, i=2)])
        (sc,) = get_context("a", net, depth=1)
        assert sc.concept == "b"
        assert sc.score == pytest.approx(math.log(6))

    def test_oracle_equivalence_single_seed(self):
        rng = random.Random(77)
        for _ in range(30):
            net = random_net(rng)
            depth = rng.randrange(1, 4)
            seed = rng.choice(net.nodes())
            got = {sc.concept: sc.score for sc in get_context(seed, net, depth)}
            want = oracle_context([seed], net, depth, 0.5)
            assert set(got) == set(want)
            for concept in got:
                assert got[concept] == pytest.approx(want[concept], abs=1e-9)

    def test_oracle_equivalence_multi_seed(self):
        rng = random.Random(78)
        for _ in range(15):
            net = random_net(rng)
            seeds = rng.sample(net.nodes(), min(2, len(net.nodes())))
            got = {sc.concept: sc.score
                   for sc in get_context(seeds, net, depth=2)}
            want = oracle_context(seeds, net, 2, 0.5)
            assert set(got) == set(want)
            for concept in got:
                assert got[concept] == pytest.approx(want[concept], abs=1e-9)


class TestDisplayNode:
    NET = ConceptNet([
        rel("UsedFor", "computer", "study", f=3, i=2, ids=(1, 55, 346, 550, 555)),
        rel("IsA", "computer", "machine", ids=(7,)),
        rel("LocationOf", "computer", "desk", ids=(8,)),
    ])

    def test_documented_sentence(self):
        entries = display_node("computer", self.NET)
        sentences = {e[1] for e in entries}
        assert "A computer is used for study" in sentences

    def test_unknown_concept_empty(self):
        assert display_node("nothing", self.NET) == []

    def test_count_matches_degree(self):
        for node in self.NET.nodes():
            assert len(display_node(node, self.NET)) == self.NET.degree(node)

    def test_ids_traceback(self):
        entries = display_node("study", self.NET)
        assert entries[0][2] == (1, 55, 346, 550, 555)


class TestRenderSentence:
    def test_isa_capitalized_for_display(self):
        sentence = render_sentence(
            rel("IsA", "aids", "sexually transmitted disease"),
            capitalize=True)
        assert sentence == "Aids is a(n) sexually transmitted disease"

    def test_tags_stripped(self):
        sentence = render_sentence(rel("UsedFor", "computador/SUBST",
                                       "estudar/VERB"))
        assert sentence == "A computador is used for estudar"

    def test_negative_form(self):
        assert render_sentence(rel("NotIsA", "dog", "cat")) == \
            "dog is not a(n) cat"

    def test_fallback_without_template(self):
        templates = RenderTemplates({})
        assert render_sentence(rel("IsA", "a", "b"), templates) == \
            "a — IsA — b"

    def test_negative_without_pattern_falls_back(self):
        assert render_sentence(rel("NotMotivationOf", "a", "b")) == \
            "a — NotMotivationOf — b"

    def test_render_extract_roundtrip_all_templated_types(self, registry,
                                                          en_rules):
        templates = default_templates()
        for rtype in templates.types():
            r = rel(rtype, "red apple", "fresh food")
            sentence = render_sentence(r, templates)
            line = f"{sentence}$$M$$18_29$$mestrado$$X$$SP$$1"
            raws = extract(line, en_rules,
                           negation_lexicon=NEGATION_LEXICONS["en"])
            keys = {(raw.rtype, raw.param1, raw.param2) for raw in raws}
            assert (rtype, "red apple", "fresh food") in keys, (rtype, sentence)


# -- analogy -------------------------------------------------------------------

SUN = ConceptNet([rel("IsA", "sun", "star", ids=(1,)),
                  rel("LocationOf", "sun", "sky", ids=(2,))])
MOON = ConceptNet([rel("IsA", "moon", "satellite", ids=(3,)),
                   rel("LocationOf", "moon", "sky", ids=(4,))])


def oracle_aligned(mapping, base, target):
    def maps(b, t):
        return b in mapping and mapping[b] == t

    return sum(
        1
        for rb in base.relations
        for rt in target.relations
        if rb.rtype == rt.rtype and maps(rb.param1, rt.param1)
        and maps(rb.param2, rt.param2)
    )


def oracle_best_mapping(base, target):
    base_nodes, target_nodes = list(base.nodes()), list(target.nodes())
    best = 0
    if len(base_nodes) <= len(target_nodes):
        for image in permutations(target_nodes, len(base_nodes)):
            best = max(best, oracle_aligned(dict(zip(base_nodes, image)),
                                            base, target))
    else:
        for image in permutations(base_nodes, len(target_nodes)):
            mapping = {b: t for t, b in zip(target_nodes, image)}
            best = max(best, oracle_aligned(mapping, base, target))
    return best


class TestGetAnalogy:
    def test_empty_network_rejected(self):
        with pytest.raises(ValueError):
            get_analogy(ConceptNet([]), SUN)

    def test_documented_sun_moon(self):
        result = get_analogy(SUN, MOON)
        by_base = {c.base_concept: c for c in result}
        assert by_base["sun"].target_concept == "moon"
        assert by_base["sun"].systematicity == 1
        types = {rb.rtype for rb, rt in by_base["sun"].supporting}
        assert types == {"LocationOf"}

    def test_identity_analogy_self_maps(self):
        rng = random.Random(5)
        for _ in range(20):
            net = random_net(rng, max_relations=12)
            result = get_analogy(net, net)
            assert result, "identity analogy found nothing"
            for corr in result:
                assert corr.base_concept == corr.target_concept
            literals = [c for c in result if c.is_literal]
            assert literals == result[:len(literals)]

    def test_disjoint_relation_types_empty(self):
        a = ConceptNet([rel("IsA", "a", "b")])
        b = ConceptNet([rel("UsedFor", "x", "y")])
        assert get_analogy(a, b) == []

    def test_one_to_one(self):
        rng = random.Random(9)
        pool = [f"c{k}" for k in range(6)]
        for _ in range(20):
            base = random_net(rng, max_relations=10, nodes=pool)
            target = random_net(rng, max_relations=10, nodes=pool)
            result = get_analogy(base, target)
            bases = [c.base_concept for c in result]
            targets = [c.target_concept for c in result]
            assert len(bases) == len(set(bases))
            assert len(targets) == len(set(targets))

    def test_greedy_near_optimal(self):
        rng = random.Random(31)
        ratios = []
        for _ in range(25):
            pool = [f"c{k}" for k in range(rng.randrange(3, 7))]
            base = random_net(rng, max_relations=8, nodes=pool)
            target = random_net(rng, max_relations=8, nodes=pool)
            result = get_analogy(base, target)
            mapping = {c.base_concept: c.target_concept for c in result}
            got = oracle_aligned(mapping, base, target)
            best = oracle_best_mapping(base, target)
            if best:
                ratios.append(got / best)
                assert got / best >= 0.9, (mapping, got, best)
        assert ratios, "oracle never found an alignable pair"

    def test_library_evaluator_matches_oracle(self):
        rng = random.Random(41)
        net1, net2 = random_net(rng), random_net(rng)
        mapping = {net1.nodes()[0]: net2.nodes()[0]}
        assert aligned_pairs(net1, net2, mapping) == \
            oracle_aligned(mapping, net1, net2)


# -- query expansion -----------------------------------------------------------

class TestExpandQuery:
    NET = ConceptNet([
        rel("LocationOf", "alarme de fogo", "parede", ids=(1,)),
        rel("IsA", "porta corta-fogo", "porta", ids=(2,)),
        rel("UsedFor", "fogo", "cozinhar", ids=(3,)),
    ])

    def test_documented_substring_hits(self, pt_lexicon):
        out = expand_query("fogo", self.NET, pt_lexicon)
        assert "alarme de fogo" in out
        assert "porta corta-fogo" in out

    def test_exact_node_context_included(self, pt_lexicon):
        out = expand_query("fogo", self.NET, pt_lexicon)
        assert "cozinhar" in out

    def test_absent_expression_empty(self, pt_lexicon):
        assert expand_query("xyzzy", self.NET, pt_lexicon) == []

    def test_substring_hits_match_scan(self, pt_lexicon):
        from sensenet.normalization import strip_tags

        out = expand_query("porta", self.NET, pt_lexicon)
        scan = {n for n in self.NET.nodes() if "porta" in strip_tags(n)}
        assert scan <= set(out)

    def test_inflected_expression_lemmatized(self, pt_lexicon):
        net = ConceptNet([rel("UsedFor", "caderno novo", "estudar", ids=(9,))])
        out = expand_query("cadernos novos", net, pt_lexicon)
        assert "caderno novo" in out


class TestDecomposePhrases:
    def test_documented_example(self, pt_lexicon):
        out = decompose_phrases("prevenir acidentes no ambiente de trabalho",
                                pt_lexicon)
        assert "acidentes" in out
        assert "ambiente de trabalho" in out
        assert "prevenir acidentes" in out
        assert "acidentes no ambiente de trabalho" in out

    def test_single_token(self, pt_lexicon):
        assert decompose_phrases("fogo", pt_lexicon) == ["fogo"]

    def test_spans_are_contiguous(self, pt_lexicon):
        expression = "prevenir acidentes no ambiente de trabalho"
        for span in decompose_phrases(expression, pt_lexicon):
            assert span in expression

    def test_longest_first(self, pt_lexicon):
        out = decompose_phrases("prevenir acidentes no ambiente de trabalho",
                                pt_lexicon)
        lengths = [len(s) for s in out]
        assert lengths == sorted(lengths, reverse=True)

    def test_english_verb_phrase(self, en_lexicon):
        out = decompose_phrases("preventing work accidents", en_lexicon)
        assert "work accidents" in out
        assert "preventing work accidents" in out
