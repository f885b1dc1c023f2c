"""Two-lead scattering on tight-binding networks and its non-Hermitian reduction."""

from ._nhlab import *  # noqa: F401,F403
from ._nhlab import NhlabError, run_cli

__all__ = [name for name in dir() if not name.startswith("_")]
