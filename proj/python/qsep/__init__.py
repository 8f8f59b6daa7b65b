"""Python interface to the qsep C++ core.

Functions returning structured results decode the core's JSON into dicts.
"""

import json as _json

from . import _core
from ._core import QsepError, decode, encode, psd_check_recursion, suite_names
from ._core import comp_basis_detector_prob, swap_test_prob

__all__ = [
    "QsepError",
    "encode",
    "decode",
    "psd_check_recursion",
    "ppt_check",
    "separability_test",
    "wval",
    "schedule",
    "protocol_run",
    "swap_test_prob",
    "comp_basis_detector_prob",
    "lemmas_verify",
    "suite_names",
]


def ppt_check(rho, dB, dC):
    return _json.loads(_core.ppt_check(rho, dB, dC))


def separability_test(rho, dB, dC, level=2, tol=1e-6, ppt=True):
    return _json.loads(_core.separability_test(rho, dB, dC, level, tol, ppt))


def wval(verifier, layout=(2, 2, 2), delta=0.1, soundness=0.4, max_iter=200000):
    return _json.loads(_core.wval(verifier, list(layout), delta, soundness, max_iter))


def schedule(kappa=2, c_yes=0.9, xi=0.1):
    return _json.loads(_core.schedule(kappa, c_yes, xi))


def protocol_run(csp, proof, schedule):
    """csp, proof and schedule are dicts in the CLI's JSON formats."""
    return _json.loads(_core.protocol_run(_json.dumps(csp), _json.dumps(proof), _json.dumps(schedule)))


def lemmas_verify(suites=("all",), trials=500, seed=7, jobs=1):
    return _json.loads(_core.lemmas_verify(list(suites), trials, seed, jobs))
