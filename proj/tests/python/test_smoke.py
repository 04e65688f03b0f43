import math

import pytest

import kondratiev as k


def test_embed_example():
    v = k.embed("m=2,a=1,p=2", "m=1,a=0,q=4", {"kind": "model", "d": 3, "l": 0})
    assert v["outcome"] == "Holds"
    assert v["rule"] == "Thm-3.3"


def test_equality_line_is_continuous_not_compact():
    src, tgt = {"m": 2, "a": 1, "p": 2}, "m=1,a=1/4,p=4"
    assert k.embed(src, tgt)["outcome"] == "Holds"
    assert k.compact(src, tgt)["outcome"] == "Fails"


def test_product_and_power():
    r = k.product("m=2,a=2,p=2", "m=2,a=2,p=2")
    assert r["best"] == "Thm-5.1"
    assert all(h["holds"] for e in r["applicable"] for h in e["hypotheses"])
    p = k.power("m=2,a=2,p=2", 3)
    assert p["applicable"]


def test_membership_lemmas():
    assert k.member_rho("-0.4", "m=1,a=1,p=2")["outcome"] == "Holds"
    assert k.member_rho("-0.4", "m=1,a=1.4,p=2")["outcome"] == "Fails"
    assert k.member_const("m=1,a=1/2,p=2", {"kind": "smooth-cone", "d": 3, "gamma": 0.8})["outcome"] == "Holds"


def test_norm_tail_slope_matches_closed_form():
    r = k.norm("rho_pow(b=-0.4)*psi()", "m=1,a=1,p=2")
    assert r["converged"]
    assert math.isclose(r["series"]["tailSlope"], -0.2, abs_tol=1e-6)
    e = k.extremal_norm("rho_pow(b=-0.4)*psi()", "m=1,a=1,p=2")
    assert e["value"] <= r["value"]
    d = k.norm("rho_pow(b=-0.4)*psi()", "m=1,a=1.4,p=2", quad=k.quad_profile("fast"))
    assert not d["converged"]
    assert math.isclose(d["series"]["tailSlope"], 0.6, abs_tol=1e-6)


def test_errors_carry_codes():
    with pytest.raises(k.KondratievError) as e:
        k.embed("m=2,a=x,p=2", "m=1,a=0,p=2")
    assert e.value.code == "invalid-params"
    with pytest.raises(k.KondratievError) as e:
        k.verify("no-such-suite")
    assert e.value.code == "suite-unknown"
    assert isinstance(e.value, ValueError)


def test_verify_fast_suite():
    r = k.verify("closed-form")
    assert r["pass"]
    assert r["suites"][0]["suite"] == "closed-form"
    assert "homogeneity" in k.suite_ids()


def test_cli_in_process():
    code, out, err = k.run(["decide", "algebra", "--space", "m=2,a=2,p=2"])
    assert code == 0 and '"outcome"' in out
    code, out, err = k.run(["decide", "embed", "--src", "m=2,a=1,p=2"])
    assert code == 2 and "--tgt" in err
