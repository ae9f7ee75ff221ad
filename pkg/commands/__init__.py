"""
Subcommand registration for hypocalc.
Importing this package registers every subcommand on the click group.
"""

from . import classify_commands  # noqa: F401
from . import scan_commands  # noqa: F401
from . import solve_commands  # noqa: F401
from . import decay_commands  # noqa: F401
from . import microlocal_commands  # noqa: F401
