"""Trajectory kernels.

`cm_trajectory` advances a pure field state through a whole sequence of atoms.
The compiled implementation is used when it was built; otherwise the numpy
version is substituted.  Setting ``FOCKCM_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _fallback

BACKEND = "python"
cm_trajectory = _fallback.cm_trajectory

if os.environ.get("FOCKCM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        cm_trajectory = _kernels.cm_trajectory
        BACKEND = "cython"

STATUS_OK = 0
STATUS_NULL_OUTCOME = 1
STATUS_TRUNCATION = 2

__all__ = [
    "BACKEND",
    "cm_trajectory",
    "STATUS_OK",
    "STATUS_NULL_OUTCOME",
    "STATUS_TRUNCATION",
]
