from pathlib import Path

import pytest

import whynot as wn

DATA = Path(__file__).resolve().parents[2] / "data" / "cities"
QUERY = "q(x, y) :- Train-Connections(x, z), Train-Connections(z, y)."


@pytest.fixture(scope="module")
def schema():
    return wn.Schema.from_file(str(DATA / "schema.json"))


@pytest.fixture(scope="module")
def inst(schema):
    return wn.Instance.from_dir(schema, str(DATA / "data"))


@pytest.fixture(scope="module")
def question(inst):
    return wn.WhyNotInstance(inst, QUERY, ("Amsterdam", "New York"))


def test_answers(inst):
    got = wn.evaluate(QUERY, inst)
    assert got == {
        ("Amsterdam", "Amsterdam"),
        ("Amsterdam", "Rome"),
        ("Berlin", "Berlin"),
        ("New York", "Santa Cruz"),
    }


def test_numbers_come_back_as_floats(inst):
    rows = inst.tuples("Cities")
    assert ("Amsterdam", 779808.0, "Netherlands", "Europe") in rows


def test_file_ontology(schema, question):
    onto = wn.Ontology.from_file(str(DATA / "ontology.json"), schema)
    mges = wn.exhaustive_mge(question, onto)
    assert ["European-City", "US-City"] in mges
    assert wn.check_mge(question, onto, ["European-City", "US-City"])
    assert not wn.check_mge(question, onto, ["Dutch-City", "US-City"])
    assert wn.is_explanation_in(question, onto, ["Dutch-City", "US-City"])


def test_obda_ontology(schema, inst, question):
    onto = wn.Ontology.from_obda(str(DATA / "obda.json"), schema)
    assert len(onto) == 13
    assert onto.extension("EU-City", inst) == {"Amsterdam", "Berlin", "Rome"}
    assert wn.check_mge(question, onto, ["EU-City", "N.A.-City"])


def test_instance_derived(inst, question):
    for frag in (wn.Fragment.SELECTION_FREE, wn.Fragment.FULL):
        e = wn.incremental_mge(question, frag)
        assert len(e) == 2
        assert wn.is_explanation(question, e)
        assert wn.check_mge_instance(question, e, frag)
    assert e[0].extension(inst) is None  # unbounded


def test_concepts(schema, inst):
    big = wn.Concept.parse("BigCity.name", schema)
    sel = wn.Concept.parse("Cities[population>7000000].name", schema)
    assert big.extension(inst) == {"New York", "Tokyo"}
    assert wn.subsumed_by_instance(sel, big, inst)
    with pytest.raises(wn.UnsupportedConstraintClass):
        wn.subsumed_by_schema(sel, big, schema)
    assert str(wn.Concept.parse(str(sel), schema)) == str(sel)


def test_errors(schema, inst):
    with pytest.raises(wn.ParseError):
        wn.evaluate("q(x) :- Cities(x", inst)
    with pytest.raises(wn.TuplePresent):
        wn.WhyNotInstance(inst, QUERY, ("Amsterdam", "Rome"))
    with pytest.raises(wn.Error):
        wn.Concept.parse("Nope.name", schema)
