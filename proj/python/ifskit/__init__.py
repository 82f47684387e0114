from ._ifskit import *  # noqa: F401,F403
from ._ifskit import __doc__  # noqa: F401
