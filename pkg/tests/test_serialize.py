import json

import pytest

from nlsa.cohomology import Cochain
from nlsa.fixtures import abelian, s1
from nlsa.metric import cyclic_cocycle_basis
from nlsa.representation import cached_coadjoint
from nlsa.serialize import (SerializationError, algebra_dumps, algebra_loads,
                            cochain_dumps, cochain_loads, form_dumps,
                            form_loads)


def test_algebra_roundtrip_byte_stable(zoo):
    for g in zoo.values():
        text = algebra_dumps(g)
        again = algebra_loads(text)
        assert algebra_dumps(again) == text
        assert again.constants == g.constants
        assert again.space == g.space


def test_packaged_fixture_files_match_builders(zoo):
    from pathlib import Path

    from nlsa.fixtures import m1, m2
    from nlsa.serialize import form_dumps

    fixdir = Path(__file__).resolve().parents[1] / "src" / "nlsa" / "fixtures"
    for name, g in zoo.items():
        assert (fixdir / f"{name}.json").read_text() == algebra_dumps(g)
    for name, ext in (("M1", m1()), ("M2", m2())):
        assert (fixdir / f"{name}_form.json").read_text() == \
            form_dumps(ext.total.form)


def test_algebra_malformed_parity():
    data = {"name": "x", "n": 2,
            "basis": [{"name": "a", "parity": "evenish"}], "brackets": []}
    with pytest.raises(SerializationError) as err:
        algebra_loads(json.dumps(data))
    assert "parity" in str(err.value)


def test_algebra_even_repeat_rejected():
    data = {"name": "x", "n": 2,
            "basis": [{"name": "a", "parity": "even"}],
            "brackets": [{"args": ["a", "a"], "value": {"a": "1"}}]}
    with pytest.raises(SerializationError) as err:
        algebra_loads(json.dumps(data))
    assert "repeated even" in str(err.value)


def test_algebra_scalar_and_name_errors():
    base = {"name": "x", "n": 2,
            "basis": [{"name": "a", "parity": "even"},
                      {"name": "b", "parity": "odd"}]}
    bad_scalar = dict(base, brackets=[
        {"args": ["b", "b"], "value": {"a": "1/0"}}])
    with pytest.raises(SerializationError):
        algebra_loads(json.dumps(bad_scalar))
    bad_name = dict(base, brackets=[
        {"args": ["b", "c"], "value": {"a": "1"}}])
    with pytest.raises(SerializationError):
        algebra_loads(json.dumps(bad_name))


def test_non_canonical_bracket_args_accepted():
    # e.g. descending args with the matching sign re-canonicalize cleanly
    data = {"name": "x", "n": 2,
            "basis": [{"name": "a", "parity": "even"},
                      {"name": "b", "parity": "even"},
                      {"name": "c", "parity": "even"}],
            "brackets": [{"args": ["b", "a"], "value": {"c": "-1"}}]}
    g = algebra_loads(json.dumps(data))
    assert g.bracket_indices((0, 1)) == {2: 1}


def test_form_roundtrip_and_completion(M1):
    form = M1.total.form
    text = form_dumps(form)
    again = form_loads(text, form.space)
    assert again.gram == form.gram
    assert form_dumps(again) == text


def test_form_supersymmetric_completion_odd():
    g = s1()
    # odd-odd pair: <f,f> entry completes antisymmetrically, so it must clash
    data = [{"x": "f", "y": "f", "value": "1"}]
    with pytest.raises(SerializationError):
        form_loads(json.dumps(data), g.space)
    ok = form_loads(json.dumps([{"x": "e", "y": "e", "value": "2"}]), g.space)
    assert ok.gram[0][0] == 2


def test_form_conflicting_pairs():
    g = abelian(2, 0, 2)
    data = [{"x": "a1", "y": "a2", "value": "1"},
            {"x": "a2", "y": "a1", "value": "2"}]
    with pytest.raises(SerializationError):
        form_loads(json.dumps(data), g.space)


def test_cochain_roundtrip(L1):
    theta = cyclic_cocycle_basis(L1)[0]
    text = cochain_dumps(theta)
    rho = cached_coadjoint(L1)
    again = cochain_loads(text, rho)
    assert again.coeffs == theta.coeffs
    assert cochain_dumps(again) == text


def test_cochain_parity_mismatch_rejected(L1):
    rho = cached_coadjoint(L1)
    data = {"degree": 1, "parity": 1,
            "entries": [{"args": [["e1", "e2"], "e3"], "target": "e4*",
                         "value": "1"}]}
    with pytest.raises(SerializationError) as err:
        cochain_loads(json.dumps(data), rho)
    assert "parity" in str(err.value)


def test_cochain_noncanonical_blocks_fold(L1):
    rho = cached_coadjoint(L1)
    data = {"degree": 1, "parity": 0,
            "entries": [{"args": [["e2", "e1"], "e3"], "target": "e4*",
                         "value": "1"}]}
    f = cochain_loads(json.dumps(data), rho)
    data2 = {"degree": 1, "parity": 0,
             "entries": [{"args": [["e1", "e2"], "e3"], "target": "e4*",
                          "value": "-1"}]}
    assert f.coeffs == cochain_loads(json.dumps(data2), rho).coeffs


def test_degree0_cochain_roundtrip(L1):
    rho = cached_coadjoint(L1)
    f = Cochain(L1, rho, 0, 0, {(0, 1): 2})
    text = cochain_dumps(f)
    assert cochain_loads(text, rho).coeffs == f.coeffs
    data = json.loads(text)
    assert data["entries"][0]["args"] == ["e1"]


def test_roundtrip_random_valid_algebras():
    from test_cohomology import _random_valid_algebras

    for g in _random_valid_algebras(seed=55, count=5):
        text = algebra_dumps(g)
        again = algebra_loads(text)
        assert again.constants == g.constants
        assert algebra_dumps(again) == text
