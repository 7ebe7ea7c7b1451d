"""Exact quantum dynamics of a harmonic oscillator with sudden frequency jumps,
via the Lewis-Riesenfeld invariant and the Ermakov-Pinney equation."""
from .errors import (DegenerateSearchError, DomainError, GridError, InfeasibleTargetError,
                     IntegrationError, UndefinedPhaseError)
from .observables import (MomentSet, energy_E1, energy_E2, energy_ratio_E2_E1, moments_at,
                          n_mean_window)
from .pinney import (PinneySegment, PinneySolution, rho_at, rho_dot_at, rho_static,
                     solve_ode, solve_protocol)
from .protocol import FrequencyProtocol, Segment, omega_at, revival_times, two_jump
from .squeeze import SqueezeState, phi1_closed, r1_closed, r2_closed, squeeze_at
from .transitions import (TransitionTable, prob_closed, prob_from_nmean, prob_vacuum,
                          table_at)

__version__ = "0.1.0"
