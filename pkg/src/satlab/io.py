"""Family text format and JSON run reports.

Family file::

    # comments start with '#'
    n 3
    1
    1,2
    {}

One subset per line as ascending comma-separated labels, ``{}`` for the
empty set.  A sequence file holds several families on the same ground set
separated by lines reading ``---``; the ``n`` line appears once, at the top.
"""

from __future__ import annotations

import json
import warnings
from typing import Any

from satlab import __version__
from satlab.family import FamilySequence, SetFamily, canonical_key, labels_of
from satlab.lattice import check_n

SCHEMA_VERSION = 1
SEPARATOR = "---"


class FormatError(ValueError):
    """Malformed family text; the message names the offending line."""


class DuplicateSubsetWarning(UserWarning):
    pass


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def _parse_subset(no: int, line: str, n: int) -> int:
    if line == "{}":
        return 0
    mask = 0
    prev = 0
    for tok in line.split(","):
        tok = tok.strip()
        if not tok.isdigit():
            raise FormatError(f"line {no}: expected comma-separated labels, got {line!r}")
        e = int(tok)
        if not 1 <= e <= n:
            raise FormatError(f"line {no}: element {e} is outside [{n}]")
        if e <= prev:
            raise FormatError(f"line {no}: labels must be strictly ascending")
        prev = e
        mask |= 1 << (e - 1)
    return mask


def _parse_header(lines: list[tuple[int, str]]) -> int:
    if not lines:
        raise FormatError("empty input: expected a line 'n <int>'")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
        raise FormatError(f"line {no}: expected 'n <int>', got {head!r}")
    try:
        return check_n(int(parts[1]))
    except ValueError as exc:
        raise FormatError(f"line {no}: {exc}") from None


def _parse_blocks(text: str) -> tuple[int, list[SetFamily]]:
    lines = _content_lines(text)
    n = _parse_header(lines)
    blocks: list[list[int]] = [[]]
    seen: list[set[int]] = [set()]
    for no, line in lines[1:]:
        if line == SEPARATOR:
            blocks.append([])
            seen.append(set())
            continue
        mask = _parse_subset(no, line, n)
        if mask in seen[-1]:
            warnings.warn(f"line {no}: duplicate subset {line!r} ignored", DuplicateSubsetWarning, stacklevel=3)
            continue
        seen[-1].add(mask)
        blocks[-1].append(mask)
    return n, [SetFamily.from_masks(n, b) for b in blocks]


def parse_family(text: str) -> SetFamily:
    n, fams = _parse_blocks(text)
    if len(fams) != 1:
        raise FormatError(f"expected a single family, found {len(fams)} separated by '{SEPARATOR}'")
    return fams[0]


def parse_sequence(text: str, s: int | None = None) -> FamilySequence:
    """Families separated by ``---``; one family with ``s`` given means s copies."""
    n, fams = _parse_blocks(text)
    if len(fams) == 1:
        if s is None:
            raise FormatError("a single family needs s to form a sequence")
        return FamilySequence.diagonal(fams[0], s)
    if s is not None and s != len(fams):
        raise FormatError(f"file holds {len(fams)} families but s={s}")
    return FamilySequence(tuple(fams))


def format_subset(mask: int) -> str:
    return ",".join(map(str, labels_of(mask))) if mask else "{}"


def _body(f: SetFamily) -> list[str]:
    return [format_subset(m) for m in sorted(f, key=canonical_key)]


def serialize_family(f: SetFamily) -> str:
    return "\n".join([f"n {f.n}", *_body(f)]) + "\n"


def serialize_sequence(seq: FamilySequence) -> str:
    lines = [f"n {seq.n}"]
    for k, f in enumerate(seq):
        if k:
            lines.append(SEPARATOR)
        lines.extend(_body(f))
    return "\n".join(lines) + "\n"


def make_report(command: str, inputs: dict[str, Any], checks: list[dict[str, Any]],
                result: dict[str, Any] | None = None, elapsed_ms: int | None = None) -> dict[str, Any]:
    """Top-level report: schema, command, echoed inputs, named checks, payload."""
    report: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "tool": "satlab",
        "version": __version__,
        "command": command,
        "inputs": inputs,
        "checks": checks,
        "ok": all(c["holds"] for c in checks),
    }
    if result is not None:
        report["result"] = result
    if elapsed_ms is not None:
        report["elapsed_ms"] = elapsed_ms
    return report


def dumps_report(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
