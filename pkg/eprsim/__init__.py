__version__ = "0.1.0"

from .experimentrunner import ExperimentRunner
from .sources import *
from .experiments import *
