import json

import pytest

from contextsearch.corpus import load_corpus, tokenize
from contextsearch.ontology import load_ontology

# Bracketed parse of the running-example sentence about rhubarb; shipped with
# the tests because parsing itself is out of scope (trees are input).
PARSE_S = ("(S (S (NP (NP (DT The) (JJ usable) (NNS parts)) (PP (IN of) "
           "(NP (NP (NN rhubarb)) (, ,) (NP (NP (DT a) (NN plant)) "
           "(PP (IN from) (NP (DT the) (NNP Polygonaceae) (NN family)))) (, ,)))) "
           "(VP (VBP are) (NP (NP (DT the) (ADJP (RB medicinally) (VBN used)) (NNS roots)) "
           "(CC and) (NP (DT the) (JJ edible) (NNS stalks))))) (, ,) "
           "(S (ADVP (RB however)) (NP (PRP$ its) (NNS leaves)) "
           "(VP (VBP are) (ADJP (JJ toxic)))) (. .))")

SENTENCE_S = ("The usable parts of rhubarb, a plant from the Polygonaceae family, "
              "are the medicinally used roots and the edible stalks, "
              "however its leaves are toxic.")

C1 = "rhubarb a plant from the Polygonaceae family"
C2 = "The usable parts of rhubarb are the medicinally used roots"
C3 = "The usable parts of rhubarb are the edible stalks"
C4 = "however rhubarb leaves are toxic"

ONTOLOGY_TSV = """\
# fixture ontology for the rhubarb / broccoli corpus
class\tPlant\tsubclass-of\tEntity
class\tVegetable\tsubclass-of\tPlant
class\tLocation\tsubclass-of\tEntity
class\tPerson\tsubclass-of\tEntity
class\tGender\tsubclass-of\tEntity
class\tMineral\tsubclass-of\tEntity
instance\tRhubarb\tis-a\tVegetable
instance\tBroccoli\tis-a\tVegetable
instance\tOak\tis-a\tPlant
instance\tEurope\tis-a\tLocation
instance\tAsia\tis-a\tLocation
instance\tAlbert Einstein\tis-a\tPerson
instance\tmale\tis-a\tGender
instance\tfemale\tis-a\tGender
relation\tnative-to\tPlant\tLocation
relation\tcultivated-in\tPlant\tLocation
relation\thas-gender\tPerson\tGender
fact\tRhubarb\tnative-to\tEurope
fact\tBroccoli\tnative-to\tEurope
fact\tOak\tnative-to\tAsia
fact\tBroccoli\tcultivated-in\tEurope
fact\tAlbert Einstein\thas-gender\tmale
"""

BROCCOLI_TEXT = "The edible leaves of broccoli are popular."


def make_fixture_docs():
    s_tokens = tokenize(SENTENCE_S)
    b_tokens = tokenize(BROCCOLI_TEXT)
    return [
        {"id": "rhubarb", "title": "Rhubarb", "sections": [{"heading": "", "sentences": [
            {"text": SENTENCE_S, "tokens": s_tokens, "parse": PARSE_S,
             "links": [{"first_token": 4, "last_token": 4, "entity": "Rhubarb"}]}]}]},
        {"id": "broccoli", "title": "Broccoli", "sections": [{"heading": "", "sentences": [
            {"text": BROCCOLI_TEXT, "tokens": b_tokens, "parse": None,
             "links": [{"first_token": 4, "last_token": 4, "entity": "Broccoli"}]}]}]},
    ]


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("fixture")
    (d / "ontology.tsv").write_text(ONTOLOGY_TSV, encoding="utf-8")
    with open(d / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for doc in make_fixture_docs():
            fh.write(json.dumps(doc) + "\n")
    return d


@pytest.fixture(scope="session")
def ontology(fixture_dir):
    return load_ontology(fixture_dir / "ontology.tsv")


@pytest.fixture(scope="session")
def corpus(fixture_dir, ontology):
    return load_corpus(fixture_dir / "corpus.jsonl", ontology)


def words_of(context, ontology):
    """Rendered token sequence of a context (entities by name), punctuation stripped."""
    out = []
    for it in context.items:
        if it.word is not None:
            if any(ch.isalnum() for ch in it.word):
                out.append(it.word)
        else:
            out.append(ontology.entity_name(it.entity))
    return out
