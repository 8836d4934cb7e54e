"""Quantitative Kronecker approximation.

Numbers go in as strings ("1/3", "sqrt(2)", "0.05") and come back as exact
tokens or {"lo", "hi"} enclosures. Instances are dicts in the same format as
the CLI's instance files.
"""

import json

from . import _core
from ._core import ResourceError, __version__, gamma, gamma1

__all__ = [
    "ResourceError", "__version__", "gamma", "gamma1", "bounds", "min_abs_form", "find_t", "verify_witness",
    "hypothesis", "witness", "transference", "verify_theorem1", "verify",
]


def _text(instance):
    return instance if isinstance(instance, str) else json.dumps(instance)


def bounds(N, eps, delta=None):
    if isinstance(eps, str):
        eps = [eps] * N
    return json.loads(_core._bounds(N, list(eps), delta))


def min_abs_form(lam, box, threads=1, bits=128):
    return json.loads(_core._min_abs_form(list(lam), list(box), threads, bits))


def find_t(instance, T):
    out = _core._find_t(_text(instance), str(T))
    return None if out is None else json.loads(out)


def verify_witness(instance, t):
    return json.loads(_core._verify_witness(_text(instance), str(t)))


def _run(command, instance, **settings):
    return json.loads(_core._run(command, _text(instance), **settings))


def hypothesis(instance, **settings):
    return _run("hypothesis", instance, **settings)


def witness(instance, **settings):
    return _run("witness", instance, **settings)


def transference(instance, **settings):
    return _run("transference", instance, **settings)


def verify_theorem1(instance, **settings):
    return _run("verify-theorem1", instance, **settings)


def verify(certificate, threads=1):
    """Returns (ok, mismatched keys)."""
    ok, mismatches = _core._verify(_text(certificate), threads)
    return ok, list(mismatches)
