"""atmoslab: semi-implicit finite-volume dynamics on an x-z slice.

Compressible Euler equations with rotation in conservation form, advanced
by a predictor / Strang-advection / trapezoidal-forcing step whose time
step is limited by advection only.  Two switches select reduced dynamics:
alpha_P = 0 drops compressibility (pseudo-incompressible constraint),
alpha_w = 0 drops the vertical momentum tendency (hydrostatic balance).
"""

from .grid import FaceFluxes, Grid
from .kernels import BACKEND as KERNEL_BACKEND
from .linsolve import SolveStats, SolverConfig
from .state import Background, ModelSwitches, SimState, build_background, synchronize
from .thermo import GasConstants

__version__ = "0.1.0"

__all__ = [
    "Background", "FaceFluxes", "GasConstants", "Grid", "KERNEL_BACKEND",
    "ModelSwitches", "SimState", "SolveStats", "SolverConfig",
    "build_background", "synchronize", "__version__",
]
