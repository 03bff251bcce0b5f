"""Band-edge (high-frequency) homogenization of 1D periodic factorized operators.

Pipeline: coefficients -> cell_eig (band table) -> band_edge (edge expansion)
-> bloch_synthesis (band-localized data) -> dynamics (exact vs effective
evolution) -> analysis (rates, symbol checks, sharpness).
"""
from .analysis import (epsilon_sweep, lemma1_check, lemma2_check, sharpness_probe,
                       time_sweep)
from .band_edge import BandEdgeData, classify, edge_for, extract_edge
from .bloch_synthesis import (FieldGrid, SpectralProfile, SynthesisPlan, WaveField,
                              bloch_coeff, make_plan, make_profile, synthesize)
from .cell_eig import BandTable, assemble, band_table, free_band, solve_bands
from .coefficients import PeriodicCoefficients, builtin, validate
from .dynamics import (EvolutionSpec, error_norm, evolve_effective, evolve_exact,
                       modulated_approximant)

__version__ = "0.1.0"
