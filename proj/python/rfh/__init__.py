"""Analysis, simulation and optimization of RF-powered cognitive radio networks."""

from ._rfh import *  # noqa: F401,F403
from ._rfh import __version__  # noqa: F401
