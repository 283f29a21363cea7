import random

import pytest

from sensenet.core import ProfileAttrs, ProfileQuery, default_registry
from sensenet.extraction import load_rules
from sensenet.normalization import load_lexicon

# The sample corpus traced through every pipeline phase in the project
# documentation; the last line's relation id (265) is referenced by all
# downstream stages.
SAMPLE_CORPUS = [
    "Um(a) computador é usado(a) para estudar$$M$$18_29$$mestrado$$Clementina$$SP$$1",
    "Um(a) computador é usado(a) para jogar$$M$$13_17$$2_incompleto$$São Carlos$$SP$$25",
    "Você geralmente encontra um(a) computador em uma mesa de escritório$$F$$18_29$$mestrado$$Campinas$$SP$$8",
    "Pessoas usam cadernos novos quando elas começam a estudar$$M$$13_17$$2_incompleto$$São Carlos$$SP$$265",
]

SAMPLE_EXTRACTED = [
    '(UsedFor "computador" "estudar" "M" "18_29" "mestrado" "Clementina" "SP" "1")',
    '(LocationOf "computador" "mesa de escritório" "F" "18_29" "mestrado" "Campinas" "SP" "8")',
    '(UsedFor "computador" "jogar" "M" "13_17" "2_incompleto" "São Carlos" "SP" "25")',
    '(MotivationOf "usam cadernos novos" "começam a estudar" "M" "13_17" "2_incompleto" "São Carlos" "SP" "265")',
]


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def pt_rules():
    return load_rules(bundled="pt")


@pytest.fixture(scope="session")
def en_rules():
    return load_rules(bundled="en")


@pytest.fixture(scope="session")
def pt_lexicon():
    return load_lexicon(bundled="pt")


@pytest.fixture(scope="session")
def en_lexicon():
    return load_lexicon(bundled="en")


@pytest.fixture
def rng():
    return random.Random(20080501)


def make_profile(gender="M", age="18_29", education="mestrado",
                 city="Clementina", state="SP") -> ProfileAttrs:
    return ProfileAttrs(gender, age, education, city, state)


PROFILE_POOL = [
    make_profile(),
    make_profile("M", "13_17", "2_incompleto", "São Carlos", "SP"),
    make_profile("F", "18_29", "mestrado", "Campinas", "SP"),
    make_profile("F", "30_45", "3_completo", "Belo Horizonte", "MG"),
    make_profile("M", "46_65", "doutorado", "Curitiba", "PR"),
    make_profile("F", "lt_12", "1_incompleto", "Salvador", "BA"),
]
