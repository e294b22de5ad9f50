"""
mollowsim - desk-scale simulator of a spin qubit parametrically coupled to a nanowire

Magnetic-tip field maps, NV ESR and coupling maps, two-mode mechanical
response, rotating-frame Bloch dynamics and the phonon-dressed triplet.
"""

__version__ = "1.0.0"

from .config import SystemConfig, load_config
from .simulator import SUBCOMMANDS, MollowSimulator, run_subcommand
from .errors import MollowSimError

__all__ = ['SystemConfig', 'load_config', 'SUBCOMMANDS', 'MollowSimulator', 'run_subcommand',
           'MollowSimError']
