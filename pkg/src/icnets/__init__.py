"""Checkerboard incircular nets: Laguerre geometry, pencils of quadrics and
the elliptic-function formulas for nets tangent to a conic."""

__version__ = "0.1.0"

from .laguerre import OrientedCircle, OrientedLine, LaguerreTransform  # noqa: E402,F401
from .confocal import ConfocalParams  # noqa: E402,F401
from .net import CheckerboardNet  # noqa: E402,F401
