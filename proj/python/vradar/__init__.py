"""FMCW MIMO radar network simulator, processing pipeline and grid metrics."""

from vradar._core import *  # noqa: F401,F403
from vradar._core import __version__  # noqa: F401
