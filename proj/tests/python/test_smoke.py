import json
import os
import pathlib

import pytest

import facadex

FIXTURES = pathlib.Path(os.environ.get("FACADEX_FIXTURES", pathlib.Path(__file__).parent.parent / "fixtures"))
FX = "http://sparql.xyz/facade-x/ns/"
XYZ = "http://sparql.xyz/facade-x/data/"


def test_ask_empty():
    assert facadex.ask("ASK {}") is True


def test_triplify_csv_row():
    nt = facadex.triplify("id,title\n1035,A Figure Bowling\n", "text/csv", {"csv.headers": "true"})
    expected = (
        f"_:r <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <{FX}root> .\n"
        f"_:r <http://www.w3.org/1999/02/22-rdf-syntax-ns#_1> _:row .\n"
        f'_:row <{XYZ}id> "1035" .\n'
        f'_:row <{XYZ}title> "A Figure Bowling" .\n'
    )
    assert facadex.isomorphic(nt, expected)


def test_triplify_location_json():
    nt = facadex.triplify_location(str(FIXTURES / "golden" / "malevich.json"), format="TTL")
    expected = (FIXTURES / "golden" / "malevich.ttl").read_text()
    assert facadex.isomorphic(nt, expected, format="TTL")


def test_select_over_service():
    q = (
        f"PREFIX xyz: <{XYZ}> PREFIX fx: <{FX}> "
        f"SELECT ?place {{ SERVICE <x-sparql-anything:location={FIXTURES / 'golden' / 'malevich.json'}> "
        "{ ?a xyz:activePlaces ?c . ?c fx:anySlot ?place } } ORDER BY ?place"
    )
    assert facadex.select(q) == [{"place": '"Moskov"'}, {"place": '"Ukrayina"'}]
    doc = json.loads(facadex.query(q))
    assert doc["head"]["vars"] == ["place"]
    assert facadex.query(q, format="CSV") == "place\r\nMoskov\r\nUkrayina\r\n"


def test_query_against_loaded_file():
    rows = facadex.select(
        "SELECT ?n { ?s <http://sparql.xyz/facade-x/data/fc> ?n }", load=FIXTURES / "golden" / "malevich.ttl"
    )
    assert rows == [{"n": '"Kazimir Malevich"'}]


def test_errors_carry_kind():
    with pytest.raises(facadex.FacadexError) as info:
        facadex.query("SELECT * { SERVICE <x-sparql-anything:location=/no/such.csv> { ?s ?p ?o } }")
    assert info.value.kind == "missing-file"
    assert "/no/such.csv" in str(info.value)
    with pytest.raises(facadex.FacadexError) as info:
        facadex.query("SELECT")
    assert info.value.kind == "syntax"
