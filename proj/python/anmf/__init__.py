"""Adaptive normalized matched filter: covariance estimation, asymptotic
theory, data-driven shrinkage design, and Monte Carlo evaluation."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
