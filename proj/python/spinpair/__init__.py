"""Dissipative dynamics of a driven dipolar-coupled spin pair."""

from spinpair._core import *  # noqa: F401,F403
from spinpair._core import __version__  # noqa: F401
