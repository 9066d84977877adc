"""Entanglement measures for multipartite states: REE, geometric measure, robustness bounds."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, ValidationError, ParseError  # noqa: F401
