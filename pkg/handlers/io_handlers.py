"""JSON documents in, JSON or CSV payloads out."""
import csv
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Sequence, TextIO, Union

from constants import (
    EXIT_OK, FORMAT_BREAKPOINTS, FORMAT_PROFILE, NORM_KIND_CLASSIC, NORM_KIND_NAMED,
    NORM_KIND_WEIGHTS,
)
from services.norms import NormFn, WeightSequence, classic_norm, named_weights, standard_evaluator
from services.profiles import CriticalProfile, FunctionLike, PiecewiseLinearFunction
from utils.errors import ValidationError

logger = logging.getLogger(__name__)

Payload = Union[dict, List[dict]]


@dataclass
class CommandResult:
    """Payload of a command and the exit code it asks for."""
    payload: Payload
    exit_code: int = EXIT_OK


@dataclass
class NormSpec:
    """A norm evaluator together with its display label and defining weights."""
    label: str
    evaluate: NormFn
    weights: Optional[WeightSequence] = None


# ==================== LOADING ====================

def load_json(path: Union[str, Path]) -> dict:
    """Read a JSON document, turning I/O and syntax problems into ValidationError."""
    try:
        with open(path, encoding='utf-8') as f:
            doc = json.load(f)
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path} is not valid JSON: {e.msg} (line {e.lineno})") from e
    if not isinstance(doc, dict):
        raise ValidationError(f"{path} must contain a JSON object")
    return doc


def _number_list(raw: Any, what: str) -> List[float]:
    if not isinstance(raw, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw
    ):
        raise ValidationError(f"{what} must be a list of numbers")
    return [float(x) for x in raw]


def parse_function(doc: dict) -> FunctionLike:
    """
    Parse {"function": {"format": "breakpoints", "points": [[t, v], ...]}}
    or {"function": {"format": "profile", "values": [u0, ..., um]}}.
    """
    body = doc.get('function')
    if not isinstance(body, dict):
        raise ValidationError('missing "function" object')

    kind = body.get('format')
    if kind == FORMAT_BREAKPOINTS:
        points = body.get('points')
        if not isinstance(points, list) or not all(isinstance(p, list) and len(p) == 2 for p in points):
            raise ValidationError("points must be a list of [t, v] pairs")
        return PiecewiseLinearFunction(tuple(tuple(_number_list(p, "a point")) for p in points))
    if kind == FORMAT_PROFILE:
        return CriticalProfile(tuple(_number_list(body.get('values'), "profile values")))
    raise ValidationError(f"unknown function format: {kind!r}")


def parse_norm(doc: dict) -> NormSpec:
    """
    Parse a norm descriptor {"norm": {"kind": "weights" | "named" | "classic", ...}}.

    A function document is accepted as well and stands for ‖·‖_[ψ].
    """
    if 'function' in doc:
        psi = parse_function(doc)
        return NormSpec('psi', standard_evaluator(psi))

    body = doc.get('norm')
    if not isinstance(body, dict):
        raise ValidationError('missing "norm" or "function" object')
    kind = body.get('kind')
    if kind == NORM_KIND_WEIGHTS:
        weights = WeightSequence(tuple(_number_list(body.get('weights'), "weights")))
        return NormSpec(weights.name, standard_evaluator(weights), weights)
    if kind == NORM_KIND_NAMED:
        n = body.get('n')
        if n is not None and (not isinstance(n, int) or isinstance(n, bool)):
            raise ValidationError("n must be an integer")
        e = body.get('e')
        weights = named_weights(body.get('name'), n, None if e is None else _number_list(e, "e"))
        return NormSpec(weights.name, standard_evaluator(weights), weights)
    if kind == NORM_KIND_CLASSIC:
        name = body.get('name')
        return NormSpec(name, classic_norm(name))
    raise ValidationError(f"unknown norm kind: {kind!r}")


def load_function(path: Union[str, Path]) -> FunctionLike:
    return parse_function(load_json(path))


def load_norm(path: Union[str, Path]) -> NormSpec:
    return parse_norm(load_json(path))


def parse_csv_numbers(text: str) -> List[float]:
    """Parse a comma separated list such as '0.01,0,0'."""
    try:
        return [float(x) for x in text.split(',') if x.strip()]
    except ValueError as e:
        raise ValidationError(f"not a comma separated list of numbers: {text!r}") from e


# ==================== OUTPUT ====================

def _cell(value: Any) -> Any:
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value)
    return value


def write_payload(payload: Payload, fmt: str, stream: Optional[TextIO] = None) -> None:
    """
    Write a payload to stdout.

    Floats are written with repr, the shortest text that parses back to the
    same value, in both formats. CSV nests lists and dicts as JSON cells.
    """
    stream = stream or sys.stdout
    if fmt == 'json':
        stream.write(json.dumps(payload) + '\n')
        return

    rows: Sequence[dict] = payload if isinstance(payload, list) else [payload]
    if not rows:
        return
    writer = csv.DictWriter(stream, fieldnames=list(rows[0].keys()), lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(value) for key, value in row.items()})


def write_error(error: Exception, stream: Optional[TextIO] = None) -> None:
    """Machine-readable error line on stderr."""
    stream = stream or sys.stderr
    stream.write(json.dumps({'error': type(error).__name__, 'message': str(error)}) + '\n')
