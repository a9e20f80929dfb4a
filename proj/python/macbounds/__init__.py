"""Capacity-region bounds for the two-user state-dependent MAC with one
informed encoder and degraded message sets."""

from macbounds._core import *  # noqa: F401,F403
from macbounds._core import __version__  # noqa: F401
