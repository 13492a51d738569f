"""Wind-power feasibility atlas: imputation, power curves, battery scans, entropy."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
