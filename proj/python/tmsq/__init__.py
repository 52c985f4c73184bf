"""Mechanically mediated two-mode squeezing in a three-mode cavity.

Thin re-export of the compiled extension; everything lives in C++.
"""

from ._tmsq import *  # noqa: F401,F403
from ._tmsq import __version__  # noqa: F401
