"""Hybrid quantum-classical credit classifier.

Statevector simulation of a data re-uploading variational circuit, exact
parameter-shift gradients, a minimal dense network around it, and the
training/evaluation protocol (ROC/AUC, qubit/block sweeps, timing).
"""

try:
    from qcredit._core import *  # noqa: F401,F403  (installed package layout)
    from qcredit import _core as core  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout used by ctest
    from _core import *  # noqa: F401,F403
    import _core as core  # noqa: F401

__version__ = "0.1.0"
