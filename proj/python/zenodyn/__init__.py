"""Non-Hermitian effective dynamics, master-equation checks and Zeno indicators."""

from ._core import *  # noqa: F401,F403
from ._core import ZenodynError, cli_run, indicators, sweep_three_state, three_state  # noqa: F401

__version__ = "0.1.0"
