"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise,
or when ``LOOPTORSORS_PURE_PYTHON`` is set to a non-empty value other than
``0``, the pure-Python ``_pykernels`` are used.  ``BACKEND`` names the choice.
"""
import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("LOOPTORSORS_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
else:
    _impl = _pykernels

congruence_bfs = _impl.congruence_bfs
finite_field_has_zero = _impl.finite_field_has_zero
generator_moves = _pykernels.generator_moves


def backends():
    """Map of backend name to kernel module for every backend importable here."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
