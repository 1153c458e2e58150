"""
thwaves: ecuacion de onda semi-discreta 1-D con fronteras de Dirichlet, dividida
en onda de Toeplitz y onda de Hankel y evaluada con expansiones finitas de Bessel.
"""

from .bessel_kernel import BesselTable, bessel_j, bessel_table
from .bessel_waves import NuPsiBasis, build_basis, evaluate_split_bessel
from .errors import ThwavesError
from .spectral_core import GridSpec, Wavefield, make_grid, wave_solution
from .th_split import SplitWave, split_wave_spectral

__version__ = "0.1.0"

__all__ = [
    "BesselTable",
    "GridSpec",
    "NuPsiBasis",
    "SplitWave",
    "ThwavesError",
    "Wavefield",
    "bessel_j",
    "bessel_table",
    "build_basis",
    "evaluate_split_bessel",
    "make_grid",
    "split_wave_spectral",
    "wave_solution",
]
