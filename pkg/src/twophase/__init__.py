"""Two-fluid interfaces in a periodic channel: geometry, harmonic fields, energies, dynamics."""
from .dynamics import (MonitorReport, Traces, WaveState, diagnostics, integrate,
                       load_checkpoint, pressure_jump_residual, recover_traces, rhs,
                       run_with_monitors, save_checkpoint, step, suggest_dt)
from .energetics import (DiagnosticsRecord, PhysicalParams, curvature_identity_check,
                         energies, energy_condition, mass, mass_crosscheck,
                         potential_energy, psi_trace, records_from_csv, records_to_csv,
                         rs_nonnegativity_check, surface_remainder, trace_estimate_ratio,
                         virial_functional)
from .errors import (ConfigError, ConvergenceError, CriterionInapplicable, DomainError,
                     RefinementNeeded, ResolutionError, SelfIntersectionError,
                     TubularMapError, TwoPhaseError, UnsupportedError)
from .geometry import (ArcCurve, GraphInterface, TubularMap, chord_arc_constant, curvature,
                       epsilon_of_state, epsilon_value, length_curvature_bound,
                       load_interface_csv, tubular_map_check, write_interface_csv)
from .harmonic import (DnoExpansion, LayerField, LayerSpec, decay_profile, dno_apply,
                       extend, volume_quadrature)
from .linear import (ModeSpec, coupling, dispersion, growth_rate, kelvin_criterion,
                     lannes_criterion, linearized_mode, make_linear_state)

__version__ = "0.1.0"
