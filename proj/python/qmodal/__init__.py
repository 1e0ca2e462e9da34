"""Finite-dimensional toolkit for contexts, modalities, transition matrices,
unistochastic fits, spin representations and sequential measurement chains."""

from qmodal._core import *  # noqa: F401,F403
from qmodal._core import __doc__ as _core_doc

__doc__ = _core_doc
__version__ = "0.1.0"
