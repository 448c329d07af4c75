from ._core import *  # noqa: F401,F403
from ._core import Error, Kind, ZeroSet, ArithTable, PrimeSieve, FormFactorCurve

__all__ = [name for name in dir() if not name.startswith("_")]
