"""State literals accepted on the command line.

Grammar (whitespace around operators is ignored)::

    state   := factor ('*' factor)*          tensor product, party-wise
    factor  := atom ('^' INT)?               tensor power
    atom    := JSON | 'ghz:r=R,k=K' | 'schmidt:[c1,c2,...]'
             | 'epr:pair=(a,b),k=K'

JSON atoms look like ``{"dims": [2, 2], "amps": [[re, im], ...]}``.
Inputs whose norm is off by more than 1e-8 are rejected; smaller
deviations (printing round-off) are corrected.
"""

from __future__ import annotations

import json
import math
import re

import numpy as np

from .states import PureState, StateError, epr, ghz, tensor, tensor_power

INPUT_NORM_TOL = 1e-8

_OPEN = "([{"
_CLOSE = ")]}"


class StateParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def parse_state(text: str) -> PureState:
    parts = _split_top(text, "*")
    state = None
    for start, part in parts:
        factor = _parse_factor(part, start)
        if state is None:
            state = factor
        else:
            try:
                state = tensor(state, factor)
            except StateError as exc:
                raise StateParseError(str(exc), start + len(part) - len(part.lstrip())) from None
    return state


def _split_top(text: str, sep: str) -> list[tuple[int, str]]:
    depth, in_str, start = 0, False, 0
    out = []
    for i, ch in enumerate(text):
        if ch == '"':
            in_str = not in_str
        elif in_str:
            continue
        elif ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
            if depth < 0:
                raise StateParseError(f"unbalanced {ch!r}", i)
        elif ch == sep and depth == 0:
            out.append((start, text[start:i]))
            start = i + 1
    if depth != 0 or in_str:
        raise StateParseError("unterminated bracket or string", len(text))
    out.append((start, text[start:]))
    return out


def _parse_factor(part: str, offset: int) -> PureState:
    lead = len(part) - len(part.lstrip())
    body = part.strip()
    offset += lead
    if not body:
        raise StateParseError("empty state literal", offset)
    m = re.fullmatch(r"(.*?)\s*\^\s*(\d+)", body, flags=re.S)
    if m:
        atom = _parse_atom(m.group(1), offset)
        power = int(m.group(2))
        if power < 1:
            raise StateParseError("tensor power must be >= 1", offset + m.start(2))
        return tensor_power(atom, power)
    return _parse_atom(body, offset)


def _parse_atom(body: str, offset: int) -> PureState:
    if body.startswith("{"):
        return _parse_json(body, offset)
    name, colon, args = body.partition(":")
    if not colon:
        raise StateParseError(f"expected 'name:args' or JSON, got {body!r}", offset)
    args_at = offset + len(name) + 1
    try:
        if name == "ghz":
            kw = _keywords(args, args_at, {"r", "k"})
            return ghz(int(kw["r"]), int(kw["k"]))
        if name == "schmidt":
            return _parse_schmidt(args, args_at)
        if name == "epr":
            kw = _keywords(args, args_at, {"pair", "k"})
            pm = re.fullmatch(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", kw["pair"])
            if not pm:
                raise StateParseError("pair must look like (a,b)", args_at)
            return epr(int(kw["k"]), (int(pm.group(1)), int(pm.group(2))))
    except StateError as exc:
        raise StateParseError(str(exc), offset) from None
    except ValueError as exc:
        if isinstance(exc, StateParseError):
            raise
        raise StateParseError(str(exc), args_at) from None
    raise StateParseError(f"unknown state constructor {name!r}", offset)


def _keywords(args: str, offset: int, required: set[str]) -> dict[str, str]:
    out = {}
    for pos, item in _split_top(args, ","):
        key, eq, value = item.partition("=")
        key = key.strip()
        if not eq or key not in required:
            raise StateParseError(f"unexpected argument {item.strip()!r}", offset + pos)
        out[key] = value.strip()
    missing = required - out.keys()
    if missing:
        raise StateParseError(f"missing argument(s) {sorted(missing)}", offset)
    return out


def _parse_schmidt(args: str, offset: int) -> PureState:
    try:
        coeffs = json.loads(args)
    except json.JSONDecodeError as exc:
        raise StateParseError(f"bad coefficient list: {exc.msg}", offset + exc.pos) from None
    if not isinstance(coeffs, list) or not coeffs or not all(isinstance(c, (int, float)) for c in coeffs):
        raise StateParseError("schmidt expects a list of numbers", offset)
    c = np.asarray(coeffs, dtype=float)
    if (c < 0).any():
        raise StateParseError("Schmidt coefficients must be nonnegative", offset)
    _check_norm(c.sum(), offset)
    d = c.size
    amps = np.zeros(d * d, dtype=complex)
    amps[np.arange(d) * (d + 1)] = np.sqrt(c / c.sum())
    return PureState((d, d), amps)


def _parse_json(body: str, offset: int) -> PureState:
    try:
        obj = json.loads(body)
    except json.JSONDecodeError as exc:
        raise StateParseError(f"bad JSON: {exc.msg}", offset + exc.pos) from None
    if not isinstance(obj, dict) or set(obj) != {"dims", "amps"}:
        raise StateParseError('JSON state needs exactly the keys "dims" and "amps"', offset)
    try:
        amps = np.array([complex(re_, im) for re_, im in obj["amps"]])
        dims = tuple(int(d) for d in obj["dims"])
    except (TypeError, ValueError):
        raise StateParseError("amps must be a list of [re, im] pairs, dims a list of ints", offset) from None
    if amps.size != math.prod(dims):
        raise StateParseError(f"{amps.size} amplitudes do not fit dims {list(dims)}", offset)
    norm2 = float(np.vdot(amps, amps).real)
    _check_norm(norm2, offset)
    try:
        return PureState(dims, amps / math.sqrt(norm2))
    except StateError as exc:
        raise StateParseError(str(exc), offset) from None


def _check_norm(norm2: float, offset: int) -> None:
    if abs(norm2 - 1.0) > INPUT_NORM_TOL:
        raise StateParseError(f"state is not normalized (squared norm {norm2!r})", offset)


def state_to_json(phi: PureState) -> dict:
    return {"dims": list(phi.dims), "amps": [[float(a.real), float(a.imag)] for a in phi.amps]}
