"""Smoke tests of the Python bindings against pinned outputs."""

import pytest

import revorder


def test_gen_addition_golden():
    assert revorder.gen("123+46") == "123+46=r|961"


def test_gen_multiplication_chain():
    trace = revorder.gen("12×4567")
    assert trace.startswith("12×4567=12×4000+12×500+12×60+12×7=")
    assert trace.endswith("=r|40845=54804")


def test_gen_division_rollback_verifies():
    trace = revorder.gen("948÷12", rollback_at=0, rollback_delta=1)
    assert "W" in trace
    assert "-r|21" in trace
    result = revorder.verify(trace)
    assert result["valid"] is True


def test_verify_reports_tampering():
    result = revorder.verify("123+46=r|971")
    assert result["valid"] is False
    assert result["expected"] == "169"
    assert result["found"] == "179"


def test_decode_division():
    assert revorder.decode(revorder.gen("948÷12")) == "79"
    assert revorder.decode(revorder.gen("950÷12")) == "79R2"


def test_csid_scores():
    assert revorder.csid("123+179") == {"plain": 2, "revorder": 1}


def test_worstcase_formulas():
    assert revorder.worstcase("mul_direct", 3) == "57"
    assert revorder.worstcase("div_direct", 4, 2) == "24"
    assert revorder.worstcase("mul_decomposed", 9) == "O(n)"


def test_carry_chain():
    assert revorder.carry_chain("123+179") == 2


def test_token_cost_one_extra():
    cost = revorder.token_cost("123+46")
    assert cost["extra"] == 1
    assert cost["total"] == cost["bare"] + 1


def test_rewrite_chain():
    assert revorder.rewrite_chain("1+2+4") == "1+2+4=@@3@@+4=@@7@@=7"
    assert revorder.rewrite_chain("1+2+4", delimiter="##") == "1+2+4=##3##+4=##7##=7"


def test_record_at_is_deterministic():
    first = revorder.record_at(7, 0)
    again = revorder.record_at(7, 0)
    assert first == again
    assert first["prompt"].endswith("=")
    assert revorder.verify(first["prompt"] + first["completion"])["valid"] is True


def test_record_at_with_spec_json():
    spec = '{"buckets": [{"op": "div", "a_digits": [2, 8], "b_digits": [1, 4], "count": 10}]}'
    record = revorder.record_at(3, 5, spec_json=spec)
    assert record["op"] == "div"
    assert record["carry_class"] is None


def test_parse_errors_are_value_errors():
    with pytest.raises(revorder.ParseError):
        revorder.verify("gibberish")
    with pytest.raises(ValueError):
        revorder.gen("gibberish")
    with pytest.raises(revorder.DomainError):
        revorder.gen("5÷0")
