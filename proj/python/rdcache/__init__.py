"""Reuse-distance shared-cache modeling and design exploration."""

from rdcache._core import *  # noqa: F401,F403
from rdcache._core import __doc__  # noqa: F401

__version__ = "0.1.0"
