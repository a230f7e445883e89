"""Exact privacy curves for shuffled randomized response and their Poisson-type limits."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
