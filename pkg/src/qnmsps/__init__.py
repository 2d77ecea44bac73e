"""Pulsed single-photon emission from a two-level emitter coupled to a lossy
plasmonic resonator mode, with brightness and two-photon-interference figures
of merit.

The resonator mode is a quantized quasinormal mode: one complex pole carrying
both radiative and absorptive decay, split by its beta factor. The dynamics
is a Lindblad master equation on the truncated emitter (x) Fock space, driven
by a Gaussian pulse; indistinguishability comes from two-time correlators via
the quantum regression theorem.
"""

from .constants import C_NM_PS, HBAR_EV_PS, rate_from_ev
from .correlations import (
    CorrelationGrid,
    IndResult,
    compute_correlations,
    hom_correlation,
    indistinguishability,
    qrt_g1,
    qrt_g2,
)
from .dynamics import (
    IntegrationError,
    TimeGrid,
    Trajectory,
    default_time_grid,
    evolve,
    expectation,
)
from .figures import (
    EmissionBudget,
    ScenarioConfig,
    ScenarioResult,
    SweepResult,
    build_scenario,
    emission_budget,
    figure_config,
    power_flows,
    run_scenario,
    sweep,
)
from .hilbert import (
    HilbertSpace,
    annihilation,
    basis_ket,
    creation,
    excited_projector,
    ground_state,
    identity,
    number_operator,
    sigma_minus,
    sigma_plus,
    tensor,
)
from .liouvillian import (
    DensityOperator,
    PulseSpec,
    SystemModel,
    apply_generator,
    hamiltonian,
    liouvillian_static,
    pump_amplitude,
    pump_superoperator,
)
from .qnm import (
    DrudeModel,
    Emitter,
    FieldSamples,
    QnmMode,
    SFactors,
    coupling_from_purcell,
    drude_permittivity,
    effective_mode_volume,
    free_space_decay,
    purcell_spectrum,
    s_factors,
    spectral_function,
)

__version__ = "0.1.0"
