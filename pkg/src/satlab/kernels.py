"""Kernel backend selection.

The compiled extension is used when it imports; ``SATLAB_PURE_PYTHON=1``
forces the pure-Python fallback.  Both expose the same functions.
"""

from __future__ import annotations

import os

from satlab import _pykernels

python = _pykernels
compiled = None

if os.environ.get("SATLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from satlab import _ckernels as compiled  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on the build
        compiled = None

active = compiled if compiled is not None else python
BACKEND = active.NAME

# largest n each search kernel accepts on the compiled path
COMPILED_WORD_N = 6
COMPILED_RAW_N = 5


def available():
    return [k for k in (compiled, python) if k is not None]


def antichain_kernel(n):
    if active is compiled and n <= COMPILED_WORD_N:
        return compiled
    return python


def raw_kernel(n):
    if active is compiled and n <= COMPILED_RAW_N:
        return compiled
    return python
