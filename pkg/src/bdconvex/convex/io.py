"""JSON import and export of SDP problems.

Layout: ``{"c": [...], "F0": [[...]], "Fi": [[[...]]]}`` with matrices in
row-major order.  A matrix entry is either a number or, for complex data,
a ``[re, im]`` pair.
"""

import json
import numbers

import numpy as np

from bdconvex.convex.sdp import SDPProblem
from bdconvex.errors import StateFormatError


def _entry(v):
    if isinstance(v, bool):
        raise StateFormatError("booleans are not matrix entries")
    if isinstance(v, numbers.Real):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(
        isinstance(u, numbers.Real) and not isinstance(u, bool) for u in v
    ):
        return complex(v[0], v[1])
    raise StateFormatError(f"bad matrix entry {v!r}")


def _matrix(rows, name):
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise StateFormatError(f"{name} must be a list of rows")
    if len({len(r) for r in rows}) != 1:
        raise StateFormatError(f"{name} has ragged rows")
    M = np.array([[_entry(v) for v in r] for r in rows])
    return M.real.copy() if not np.any(M.imag) else M


def problem_from_json(doc) -> SDPProblem:
    """Build an :class:`SDPProblem` from a parsed JSON document or string."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as err:
            raise StateFormatError(f"invalid JSON: {err}") from None
    if not isinstance(doc, dict) or set(doc) != {"c", "F0", "Fi"}:
        raise StateFormatError('expected exactly the keys "c", "F0" and "Fi"')
    c = doc["c"]
    if not isinstance(c, list) or not all(
        isinstance(v, numbers.Real) and not isinstance(v, bool) for v in c
    ):
        raise StateFormatError("c must be a list of real numbers")
    if not isinstance(doc["Fi"], list):
        raise StateFormatError("Fi must be a list of matrices")
    F0 = _matrix(doc["F0"], "F0")
    Fi = [_matrix(F, f"F{i + 1}") for i, F in enumerate(doc["Fi"])]
    return SDPProblem(c=c, F0=F0, Fi=Fi)


def _encode(M):
    M = np.asarray(M)
    if np.iscomplexobj(M) and np.any(M.imag):
        return [[[float(v.real), float(v.imag)] for v in row] for row in M]
    return np.real(M).astype(float).tolist()


def problem_to_json(prob: SDPProblem) -> dict:
    return {
        "c": [float(v) for v in prob.c],
        "F0": _encode(prob.F0),
        "Fi": [_encode(F) for F in prob.Fi],
    }
