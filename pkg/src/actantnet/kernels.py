"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the
pure-Python reference takes over otherwise. Set ``ACTANTNET_PURE=1``
to force the pure backend (used by the benchmark and the equivalence
tests). Both backends implement the same contract; pair counts are
bit-identical, float results agree to rounding.
"""

from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _speedups  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on the build
    _speedups = None

_FORCE_PURE = os.environ.get("ACTANTNET_PURE", "") not in ("", "0")

if _speedups is None or _FORCE_PURE:
    _active = _pykernels
else:
    _active = _speedups

BACKEND: str = _active.NAME

emit_pair_keys = _active.emit_pair_keys
kk_sweep = _active.kk_sweep


def available_backends() -> dict[str, object]:
    """Importable backends by name; always contains ``python``."""
    out: dict[str, object] = {"python": _pykernels}
    if _speedups is not None:
        out["cython"] = _speedups
    return out
