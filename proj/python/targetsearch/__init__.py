"""Multi-target search: SMC intensity filter, receding-horizon planner and
simulation harness. The heavy lifting lives in the compiled _core module."""

from targetsearch._core import *  # noqa: F401,F403
from targetsearch._core import __doc__  # noqa: F401

__version__ = "0.1.0"
