"""Plain-text circuit format and JSON counts files.

Circuit text::

    qubits 3
    h 0
    mcx 0,1 2   # controls, then target
    mcz 0,1 2

Counts files are JSON objects with ``num_qubits``, ``shots``, ``counts`` and
an optional ``metadata`` object. Both formats have a canonical rendering, so
textual equality implies structural equality.
"""
from __future__ import annotations

import json
import os
import re
from collections.abc import Mapping

from .errors import ParseError, ValidationError
from .statevector import MAX_QUBITS, Circuit, CountsMap, GateKind, GateOp

_INT = re.compile(r"[0-9]+\Z")
_SINGLE = {"h": GateKind.H, "x": GateKind.X, "z": GateKind.Z}
_MULTI = {"mcx": GateKind.MCX, "mcz": GateKind.MCZ}


def render_circuit(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.num_qubits}"]
    for op in circuit.ops:
        if op.controls:
            lines.append(f"{op.kind.value} {','.join(map(str, op.controls))} {op.target}")
        else:
            lines.append(f"{op.kind.value} {op.target}")
    return "\n".join(lines) + "\n"


def _index(token: str, lineno: int, limit: int) -> int:
    if not _INT.match(token):
        raise ParseError(f"expected a qubit index, got {token!r}", lineno)
    value = int(token)
    if value >= limit:
        raise ParseError(f"qubit {value} out of range for {limit} qubits", lineno)
    return value


def parse_circuit(text: str | bytes) -> Circuit:
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("input is not valid UTF-8", bytes(text)[: exc.start].count(b"\n") + 1) from None

    num_qubits = None
    ops: list[GateOp] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        head = tokens[0].lower()
        if num_qubits is None:
            if head != "qubits" or len(tokens) != 2 or not _INT.match(tokens[1]):
                raise ParseError("header must be 'qubits <n>'", lineno)
            num_qubits = int(tokens[1])
            if not 1 <= num_qubits <= MAX_QUBITS:
                raise ParseError(f"qubit count must be in [1, {MAX_QUBITS}]", lineno)
            continue
        if head in _SINGLE:
            if len(tokens) != 2:
                raise ParseError(f"'{head}' takes exactly one qubit", lineno)
            ops.append(GateOp(_SINGLE[head], _index(tokens[1], lineno, num_qubits)))
        elif head in _MULTI:
            if len(tokens) != 3:
                raise ParseError(f"'{head}' takes a control list and a target", lineno)
            controls = [_index(t, lineno, num_qubits) for t in tokens[1].split(",")]
            target = _index(tokens[2], lineno, num_qubits)
            if target in controls:
                raise ParseError(f"control equals target ({target})", lineno)
            if len(set(controls)) != len(controls):
                raise ParseError("duplicate control qubits", lineno)
            ops.append(GateOp(_MULTI[head], target, tuple(controls)))
        elif head == "qubits":
            raise ParseError("repeated header", lineno)
        else:
            raise ParseError(f"unknown mnemonic {tokens[0]!r}", lineno)
    if num_qubits is None:
        raise ParseError("missing 'qubits <n>' header", 1)
    return Circuit(num_qubits, ops)


def read_circuit(path: str | os.PathLike) -> Circuit:
    with open(path, "rb") as fh:
        return parse_circuit(fh.read())


def write_circuit(circuit: Circuit, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_circuit(circuit))


def dumps_counts(counts: CountsMap, metadata: Mapping | None = None) -> str:
    doc = {"num_qubits": counts.num_qubits, "shots": counts.shots, "counts": dict(counts.counts)}
    if metadata:
        doc["metadata"] = dict(metadata)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads_counts(text: str) -> tuple[CountsMap, dict]:
    """Parse a counts document; returns the histogram and its metadata."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"counts file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValidationError("counts file must hold a JSON object")
    missing = {"num_qubits", "shots", "counts"} - set(doc)
    if missing:
        raise ValidationError(f"counts file missing fields {sorted(missing)}")
    if not isinstance(doc["counts"], dict):
        raise ValidationError("'counts' must map bitstrings to integers")
    metadata = doc.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise ValidationError("'metadata' must be an object")
    return CountsMap(doc["num_qubits"], doc["counts"], doc["shots"]), metadata


def write_counts(counts: CountsMap, path: str | os.PathLike, metadata: Mapping | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_counts(counts, metadata))


def read_counts(path: str | os.PathLike) -> tuple[CountsMap, dict]:
    with open(path, encoding="utf-8") as fh:
        return loads_counts(fh.read())
