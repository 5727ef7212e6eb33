__version__ = "${ZS_SPECTRUM_VERSION}"

from .potential import PotentialSpec
from .problem import Problem
from .config import ExperimentConfig
