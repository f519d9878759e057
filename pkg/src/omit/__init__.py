"""Pump-probe linear response and group delay of a one-sided optomechanical cavity."""
from . import errors
from .model import *  # noqa: F401,F403

__version__ = "0.1.0"
