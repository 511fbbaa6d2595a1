"""Constants of motion for damped harmonic oscillators, recovered from data.

Modules:
    core          oscillator parameters, damping regimes, exact solutions
    trajectory    sampling, RK4, FJet difference datasets, CSV I/O
    fjet          feature regression and eps -> 0 extrapolation
    invariants1d  1D constants for all damping regimes
    invariantsnd  2D and N-D constants
    verify        constancy reports, Poisson brackets, energy budget, path integrals
    grid          invariant grids for contour/heatmap plots
"""
from .core import (ExactSolution, OscParams, Regime, State, classify_regime,
                   derived_frequency, evaluate_exact, exact_solution_from_initial)
from .errors import (NaturalBoundaryError, OscinvError, RankDeficientError, RegimeError,
                     SamplingError, SingularStateError, TrajectoryFormatError)
from .trajectory import (DeltaDataset, Trajectory, build_delta_dataset, integrate_rk4,
                         read_csv, sample_exact, write_csv)

__version__ = "0.1.0"
