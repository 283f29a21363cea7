import random
from itertools import combinations

import pytest

from sensenet.core import ProfileAttrs, RawRelation, Relation
from sensenet.relaxation import (HeuristicConfig, PassReport,
                                 apply_family_heuristics, infer_property_of,
                                 relax, seed_and_group)

from conftest import PROFILE_POOL, make_profile

P1 = make_profile("M", "13_17", "2_incompleto", "São Carlos", "SP")
P2 = make_profile("M", "18_29", "2_completo", "São Carlos", "SP")


def raw(rtype, p1, p2, profile, sid):
    return RawRelation(rtype, p1, p2, profile, sid)


class TestSeedAndGroup:
    def test_single_relation_seeds_f1_i0(self):
        (rel,) = seed_and_group([raw("UsedFor", "a", "b", P1, 7)])
        assert (rel.f, rel.i, rel.ids) == (1, 0, (7,))

    def test_equal_relations_group(self):
        rels = seed_and_group([
            raw("UsedFor", "computador/SUBST", "jogar/VERB", P1, 25),
            raw("UsedFor", "computador/SUBST", "jogar/VERB", P1, 387),
        ])
        (rel,) = rels
        assert (rel.f, rel.i) == (2, 0)
        assert rel.ids == (25, 387)

    def test_ten_equal_relations(self):
        rels = seed_and_group([
            raw("UsedFor", "a", "b", P1, sid) for sid in range(10, 0, -1)
        ])
        (rel,) = rels
        assert rel.f == 10 and rel.ids == tuple(range(1, 11))

    def test_profiles_keep_groups_apart(self):
        rels = seed_and_group([
            raw("UsedFor", "a", "b", P1, 1),
            raw("UsedFor", "a", "b", P2, 2),
        ])
        assert len(rels) == 2
        assert all(r.f == 1 for r in rels)

    def test_f_conservation(self):
        rng = random.Random(3)
        raws = [
            raw(rng.choice(["IsA", "UsedFor"]), rng.choice("ab"),
                rng.choice("cd"), rng.choice(PROFILE_POOL[:2]), sid)
            for sid in range(1, 60)
        ]
        grouped = seed_and_group(raws)
        assert sum(r.f for r in grouped) == len(raws)


class TestPropertyOfInference:
    ISA = Relation("IsA", "computador/SUBST pessoal/ADJ", "caro/ADJ",
                   1, 0, (284,), P2)

    def test_documented_derivation(self):
        out = infer_property_of([self.ISA])
        derived = [r for r in out if r.rtype == "PropertyOf"]
        (prop,) = derived
        assert (prop.f, prop.i, prop.ids) == (0, 1, (284,))
        assert prop.profile == P2

    def test_merge_into_existing(self):
        existing = Relation("PropertyOf", "computador/SUBST pessoal/ADJ",
                            "caro/ADJ", 3, 0, (45, 78, 171), P2)
        out = infer_property_of([self.ISA, existing])
        (prop,) = [r for r in out if r.rtype == "PropertyOf"]
        assert (prop.f, prop.i) == (3, 1)
        assert prop.ids == (45, 78, 171, 284)

    def test_noun_second_param_is_guarded(self):
        isa = Relation("IsA", "dog/SUBST", "animal/SUBST", 1, 0, (3,), P1)
        out = infer_property_of([isa])
        assert [r.rtype for r in out] == ["IsA"]

    def test_untagged_params_do_not_derive(self):
        isa = Relation("IsA", "dog", "expensive", 1, 0, (3,), P1)
        out = infer_property_of([isa])
        assert [r.rtype for r in out] == ["IsA"]

    def test_idempotent_on_own_output(self):
        once = infer_property_of([self.ISA])
        twice = infer_property_of(once)
        assert once == twice

    def test_i_counts_inferred_ids(self):
        isa_two = Relation("IsA", "carro/SUBST", "caro/ADJ", 2, 0, (5, 9), P1)
        out = infer_property_of([isa_two])
        (prop,) = [r for r in out if r.rtype == "PropertyOf"]
        assert prop.i == len(prop.ids) == 2


class TestFamilyHeuristics:
    BASE = [
        Relation("UsedFor", "computador/SUBST", "estudar/VERB", 1, 0, (1,), P1),
        Relation("UsedFor", "caderno/SUBST", "estudar/VERB", 1, 0, (45,), P1),
        Relation("UsedFor", "computador/SUBST", "jogar/VERB", 2, 0, (25, 387), P1),
    ]

    def test_all_disabled_is_identity(self):
        out = apply_family_heuristics(self.BASE, config=HeuristicConfig.none())
        assert sorted(out, key=str) == sorted(self.BASE, key=str)

    def test_shared_object_derives_kline(self):
        out = apply_family_heuristics(self.BASE)
        klines = [r for r in out if r.rtype == "ThematicKLine"]
        (kline,) = klines
        assert (kline.param1, kline.param2) == ("computador/SUBST", "caderno/SUBST")
        assert (kline.f, kline.i) == (0, 1)

    def test_kline_matches_bruteforce_pairing(self):
        rng = random.Random(11)
        rels = []
        sid = 1
        for _ in range(40):
            rels.append(Relation(
                rng.choice(["UsedFor", "IsA"]),
                rng.choice(["a/SUBST", "b/SUBST", "c/SUBST", "d/SUBST"]),
                rng.choice(["x/VERB", "y/VERB"]),
                1, 0, (sid,), rng.choice(PROFILE_POOL[:2])))
            sid += 1
        rels = seed_and_group(
            [RawRelation(r.rtype, r.param1, r.param2, r.profile, r.ids[0])
             for r in rels])
        out = apply_family_heuristics(rels)
        got = {(r.param1, r.param2, r.profile)
               for r in out if r.rtype == "ThematicKLine"}
        expected = set()
        ordered = sorted(rels, key=lambda r: (min(r.ids), r.key()))
        for r1, r2 in combinations(ordered, 2):
            if (r1.rtype == r2.rtype and r1.param2 == r2.param2
                    and r1.profile == r2.profile and r1.param1 != r2.param1):
                expected.add((r1.param1, r2.param1, r1.profile))
        assert got == expected

    def test_rerun_is_fixpoint(self):
        config = HeuristicConfig(thematic_kline=True, capable_of=True,
                                 capable_of_receiving_action=True,
                                 super_thematic_kline=True)
        rels = self.BASE + [
            Relation("MotivationOf", "usar/VERB caderno/SUBST novo/ADJ",
                     "começar/VERB a/PREP estudar/VERB", 1, 0, (265,), P1),
            Relation("UsedFor", "mesa/SUBST", "estudar/VERB", 1, 0, (99,), P1),
        ]
        once = apply_family_heuristics(rels, config=config)
        twice = apply_family_heuristics(once, config=config)
        assert once == twice

    def test_no_profile_mixing(self):
        rels = [
            Relation("UsedFor", "a/SUBST", "x/VERB", 1, 0, (1,), P1),
            Relation("UsedFor", "b/SUBST", "x/VERB", 1, 0, (2,), P2),
        ]
        out = apply_family_heuristics(rels)
        assert not [r for r in out if r.rtype == "ThematicKLine"]

    def test_capable_of(self):
        out = apply_family_heuristics(
            self.BASE, config=HeuristicConfig(thematic_kline=False,
                                              capable_of=True))
        capable = {(r.param1, r.param2) for r in out if r.rtype == "CapableOf"}
        assert ("computador/SUBST", "estudar/VERB") in capable

    def test_capable_of_receiving_action(self):
        rels = [Relation("MotivationOf", "usar/VERB caderno/SUBST novo/ADJ",
                         "começar/VERB a/PREP estudar/VERB", 1, 0, (265,), P1)]
        out = apply_family_heuristics(
            rels, config=HeuristicConfig(thematic_kline=False,
                                         capable_of_receiving_action=True))
        derived = [r for r in out if r.rtype == "CapableOfReceivingAction"]
        (rel,) = derived
        assert (rel.param1, rel.param2) == ("caderno/SUBST novo/ADJ", "usar/VERB")

    def test_super_thematic_kline_chains(self):
        rels = [
            Relation("ThematicKLine", "a", "b", 0, 1, (1,), P1),
            Relation("ThematicKLine", "b", "c", 0, 1, (2,), P1),
        ]
        out = apply_family_heuristics(
            rels, config=HeuristicConfig(thematic_kline=False,
                                         super_thematic_kline=True))
        derived = [r for r in out if r.rtype == "SuperThematicKLine"]
        (rel,) = derived
        assert {rel.param1, rel.param2} == {"a", "c"}

    def test_report_counts(self):
        report = PassReport()
        apply_family_heuristics(self.BASE, config=HeuristicConfig(),
                                report=report)
        assert report.counts["thematic_kline"] == (1, 0)


class TestFullRelax:
    def test_conservation_through_all_passes(self):
        rng = random.Random(5)
        raws = []
        for sid in range(1, 80):
            raws.append(raw(
                rng.choice(["IsA", "UsedFor"]),
                rng.choice(["a/SUBST", "b/SUBST pessoal/ADJ", "c/SUBST"]),
                rng.choice(["x/VERB", "caro/ADJ", "y/SUBST"]),
                rng.choice(PROFILE_POOL[:3]), sid))
        config = HeuristicConfig(thematic_kline=True, capable_of=True,
                                 capable_of_receiving_action=True,
                                 super_thematic_kline=True)
        relaxed = relax(raws, config=config)
        assert sum(r.f for r in relaxed) == len(raws)
        for rel in relaxed:
            assert rel.i <= len(rel.ids)
