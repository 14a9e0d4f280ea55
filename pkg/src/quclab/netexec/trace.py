"""JSON-lines export of execution traces."""

from __future__ import annotations

import json
from typing import IO, Iterable

from quclab.netexec.kernel import TraceEntry


def trace_lines(trace: Iterable[TraceEntry]) -> list[str]:
    return [json.dumps(e.as_json(), sort_keys=True) for e in trace]


def write_trace(trace: Iterable[TraceEntry], fh: IO[str]) -> None:
    for line in trace_lines(trace):
        fh.write(line + "\n")
