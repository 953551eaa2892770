"""Sector measures, their Fourier profiles and centering hyperplanes."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
