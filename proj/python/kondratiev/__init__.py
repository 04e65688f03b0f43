"""Kondratiev spaces K^m_{a,p}: exact embedding/product calculus and dyadic norm quadrature.

Spaces are given as "m=2,a=3/2,p=2" strings (or dicts with m, a, p); domains as dicts like
{"kind": "smooth-cone", "d": 3, "gamma": 0.8}. Results come back as plain dicts.
Library errors raise KondratievError, a ValueError whose ``code`` names the failure
("invalid-params", "quadrature-failure", ...).
"""

import json as _json

from . import _kondratiev as _k
from ._kondratiev import KondratievError

__all__ = [
    "KondratievError",
    "embed",
    "compact",
    "algebra",
    "product",
    "power",
    "member_const",
    "member_rho",
    "norm",
    "extremal_norm",
    "verify",
    "suite_ids",
    "quad_profile",
    "run",
]


def _space(s):
    if isinstance(s, str):
        return s
    return "m={},a={},p={}".format(s["m"], s["a"], s.get("p", s.get("q")))


def _obj(o):
    if o is None:
        return ""
    return o if isinstance(o, str) else _json.dumps(o)


def embed(src, tgt, domain=None):
    return _json.loads(_k.embed(_space(src), _space(tgt), _obj(domain)))


def compact(src, tgt, domain=None):
    return _json.loads(_k.compact(_space(src), _space(tgt), _obj(domain)))


def algebra(space, domain=None):
    return _json.loads(_k.algebra(_space(space), _obj(domain)))


def product(u, v, domain=None):
    return _json.loads(_k.product(_space(u), _space(v), _obj(domain)))


def power(space, n, domain=None):
    return _json.loads(_k.power(_space(space), int(n), _obj(domain)))


def member_const(space, domain=None):
    return _json.loads(_k.member_const(_space(space), _obj(domain)))


def member_rho(b, space, domain=None):
    return _json.loads(_k.member_rho(str(b), _space(space), _obj(domain)))


def norm(func, space, domain=None, quad=None):
    """Full norm of a test-function expression, e.g. norm("rho_pow(b=-0.4)*psi()", "m=1,a=1,p=2")."""
    return _json.loads(_k.norm(func, _space(space), _obj(domain), _obj(quad), False))


def extremal_norm(func, space, domain=None, quad=None):
    return _json.loads(_k.norm(func, _space(space), _obj(domain), _obj(quad), True))


def verify(suite="all", seed=None, quad=None):
    if seed is None:
        return _json.loads(_k.verify(suite, quad=_obj(quad)))
    return _json.loads(_k.verify(suite, int(seed), _obj(quad)))


def suite_ids():
    return list(_k.suite_ids())


def quad_profile(name):
    return _json.loads(_k.quad_profile(name))


def run(args):
    """Run the CLI in-process: returns (exit_code, stdout, stderr)."""
    return _k.run([str(a) for a in args])
