"""Extracted, residual and destroyed information of quantum measurements
"""
import logging

from .__version_info__ import __version__, version_info
from .accessible import *
from .breakdown import *
from .config import *
from .errors import *
from .fock import *
from .info import *
from .measure import *
from .receivers import *

__author__ = "The ERDTools Authors"

logging.getLogger(__name__).addHandler(logging.NullHandler())
