"""Exact tools for the Qi-Hou positive maps, their biquadratic forms and
entanglement witnesses, plus numerical span and positivity scans."""

from .biquadratic import *  # noqa: F401,F403
from .certificates import *  # noqa: F401,F403
from .forms import *  # noqa: F401,F403
from .identities import *  # noqa: F401,F403
from .maps import *  # noqa: F401,F403
from .nonneg import *  # noqa: F401,F403
from .poly import *  # noqa: F401,F403
from .spanscan import *  # noqa: F401,F403

__version__ = "0.1.0"
