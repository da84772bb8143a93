"""Box-constrained sign-based attack optimizers with monotonically
decreasing coordinate-wise step caps, plus the verification utilities."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
