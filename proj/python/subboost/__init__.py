from ._subboost import *  # noqa: F401,F403
from ._subboost import __doc__  # noqa: F401
