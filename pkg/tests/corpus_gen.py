"""Random English corpus generator shared by the filtering and acceptance
suites. Sentences are template-shaped so every line extracts, and word pools
include morphological variants so normalization has work to do."""

import random

from conftest import PROFILE_POOL

THINGS = [("computer", "computers"), ("notebook", "notebooks"),
          ("desk", "desks"), ("book", "books"), ("pen", "pens"),
          ("rose", "roses"), ("apple", "apples")]
PLACES = [("kitchen", "kitchens"), ("school", "schools"),
          ("garden", "gardens"), ("street", "streets"), ("table", "tables")]
USES = ["studying", "study", "playing", "play", "writing", "write",
        "reading", "eating"]
KINDS = ["flower", "animal", "food"]
ADJS = ["new", "old", "expensive", "cheap", "red", "fresh", "beautiful"]
VERB_PHRASES = ["buy new notebooks", "bought a new notebook",
                "eat fresh apples", "ate a fresh apple",
                "read old books", "write with pens"]
MOTIVES = ["start studying", "started studying", "meet friends", "eat"]


def gen_line(rng: random.Random, sid: int) -> str:
    profile = rng.choice(PROFILE_POOL)
    shape = rng.randrange(5)
    if shape == 0:
        negation = "never " if rng.random() < 0.15 else ""
        text = (f"A {rng.choice(rng.choice(THINGS))} is {negation}used for "
                f"{rng.choice(USES)}")
    elif shape == 1:
        text = (f"You usually find a(n) {rng.choice(rng.choice(THINGS))} "
                f"in a(n) {rng.choice(rng.choice(PLACES))}")
    elif shape == 2:
        text = f"{rng.choice(rng.choice(THINGS))} is a(n) {rng.choice(KINDS)}"
    elif shape == 3:
        text = (f"People {rng.choice(VERB_PHRASES)} when they "
                f"{rng.choice(MOTIVES)}")
    else:
        text = f"{rng.choice(rng.choice(THINGS))} is {rng.choice(ADJS)}"
    g, a, e, c, s = profile.slots()
    return f"{text}$${g}$${a}$${e}$${c}$${s}$${sid}"


def gen_corpus(rng: random.Random, size: int) -> list[str]:
    return [gen_line(rng, sid) for sid in range(1, size + 1)]


def gen_query_lists(rng: random.Random) -> list[list[str]]:
    genders = ["M", "F"]
    ages = sorted({p.age_group for p in PROFILE_POOL})
    educations = sorted({p.education for p in PROFILE_POOL})
    cities = sorted({p.city for p in PROFILE_POOL})
    states = sorted({p.state for p in PROFILE_POOL})
    out = []
    for pool in (genders, ages, educations, cities, states):
        k = rng.randrange(0, len(pool) + 1)
        out.append(rng.sample(pool, k) if rng.random() > 0.4 else [])
    return out
