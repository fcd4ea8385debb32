import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stoqdyn import io
from stoqdyn.errors import ParseError, SchemaError, UnknownMember, UnknownSchema
from stoqdyn.fixtures import flip_family, nondivisible_family, rotation_family_exact, rotation_unitaries, two_ancilla_system
from stoqdyn.implementation import markov_product_family, transition_constant_family
from stoqdyn.scalar import UNDEFINED
from stoqdyn.statistical import DeterministicSystem

import helpers

H = F(1, 2)


def round_trip(obj):
    return json.loads(json.dumps(obj))


def test_schema_lookup():
    m = io.schema("measure")
    assert {"grid", "n", "table"} <= set(m["required"])
    assert "re" in io.schema_text("unitary") and "im" in io.schema_text("unitary")
    with pytest.raises(UnknownSchema):
        io.schema("bogus")
    assert set(io.SCHEMAS) == {"dynamics", "measure", "family", "detsystem", "ancilla", "unitary"}


def test_scalar_codec():
    assert io.encode_scalar(F(3, 4)) == "3/4"
    assert io.decode_scalar("3/4") == F(3, 4)
    assert io.decode_scalar(2) == 2
    assert io.decode_scalar("undefined") is UNDEFINED
    assert io.decode_scalar("1/2+1/4*sqrt(2)") == rotation_family_exact().at(1)[0][0]
    with pytest.raises(SchemaError):
        io.decode_scalar("half")


def test_matrices_are_stored_column_major():
    obj = io.dump_dynamics(nondivisible_family())
    assert obj["matrices"][1] == [["1", "0"], ["1/2", "1/2"]]
    rows = dict(obj, layout="rows", matrices=[[[str(x) for x in r] for r in m] for m in nondivisible_family().matrices])
    assert io.load_dynamics(rows).repr == nondivisible_family()


def test_dynamics_round_trip():
    for fam in (nondivisible_family(), rotation_family_exact()):
        assert io.load_dynamics(round_trip(io.dump_dynamics(fam))).repr == fam


def test_missing_identity_is_schema_error():
    obj = io.dump_dynamics(nondivisible_family())
    obj["matrices"][0] = [["0", "1"], ["1", "0"]]
    with pytest.raises(SchemaError):
        io.load_dynamics(obj)
    del obj["matrices"]
    with pytest.raises(SchemaError):
        io.load_dynamics(obj)


def test_measure_round_trip_and_duplicates():
    mu = markov_product_family(flip_family()).member((H, H))
    back = io.load_measure(round_trip(io.dump_measure(mu)))
    assert back == mu
    obj = io.dump_measure(mu)
    obj["table"].append(obj["table"][0])
    with pytest.raises(SchemaError):
        io.load_measure(obj)


def test_family_round_trip_rebuilds_transition_constant_rule():
    fam = transition_constant_family(nondivisible_family(), max_denominator=2)
    back = io.load_family(round_trip(io.dump_family(fam)))
    assert dict(back.members) == dict(fam.members)
    assert back.member((F(1, 7), F(6, 7))) == fam.member((F(1, 7), F(6, 7)))
    prod = io.load_family(round_trip(io.dump_family(markov_product_family(flip_family(), max_denominator=2))))
    with pytest.raises(UnknownMember):
        prod.member((F(1, 7), F(6, 7)))


def test_detsystem_and_ancilla_round_trip():
    D = DeterministicSystem.from_rows((0, 1, 2), [[1, 2], [1, 1], [2, 1]])
    assert io.load_detsystem(round_trip(io.dump_detsystem(D))) == D
    SA, lam = two_ancilla_system()
    back, lam2 = io.load_ancilla(round_trip(io.dump_ancilla(SA, lam)))
    assert back == SA and lam2 == lam
    obj = io.dump_ancilla(SA, (1, 0, 0))
    with pytest.raises(SchemaError):
        io.load_ancilla(obj)


def test_unitary_round_trip():
    U = rotation_unitaries()
    back = io.load_unitary(round_trip(io.dump_unitary(U)))
    assert all(np.allclose(a, b, atol=1e-15) for a, b in zip(U.matrices, back.matrices))
    obj = io.dump_unitary(U)
    obj["matrices"][1][0][0] = {"re": 2, "im": 0}
    with pytest.raises(SchemaError):
        io.load_unitary(obj)


def test_read_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError):
        io.read_json(bad)
    with pytest.raises(ParseError):
        io.read_json(tmp_path / "missing.json")


def test_jsonable_and_dumps_are_deterministic():
    payload = {"m": nondivisible_family().at(1), "u": UNDEFINED, "z": 1 + 2j, (1, 2): np.int64(3)}
    text = io.dumps(payload)
    assert text == io.dumps(payload)
    data = json.loads(text)
    assert data["m"] == [["1", "1/2"], ["0", "1/2"]]
    assert data["u"] == "undefined" and data["z"] == {"re": 1.0, "im": 2.0}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_families_round_trip(s):
    rng = np.random.default_rng(s)
    fam = helpers.matrix_family(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4)))
    assert io.load_dynamics(round_trip(io.dump_dynamics(fam))).repr == fam
