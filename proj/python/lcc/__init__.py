"""Leading cruise control: linear analysis and nonlinear simulation of mixed traffic."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
