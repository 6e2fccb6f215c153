"""Partition functions of 1D and 2D Ising models on primal and dual factor graphs."""

from ._isingdual import *  # noqa: F401,F403
from ._isingdual import __version__  # noqa: F401
