"""Relativistic and quantum information toolkit.

Density operators and entropies, thermal and black-hole entropy balances,
information seen by moving observers, spin entanglement of boosted wave
packets, teleportation and superdense coding, and geometric entropy of
harmonic chains.
"""
from .qstate import (
    BellKind,
    DensityOperator,
    PureState,
    ValidationError,
    as_density,
    basis_state,
    bell_state,
    partial_trace,
    pure_density,
    tensor,
)
from .entropy import (
    EntropyUnit,
    SampledDensity,
    ThermoParams,
    classical_density,
    conditional_amplitude_operator,
    conditional_amplitude_spectrum,
    conditional_entropy,
    conditional_vn,
    discretized_differential_entropy,
    mutual_information,
    mutual_vn,
    shannon_entropy,
    thermo_information,
    von_neumann_entropy,
)
from .thermal import (
    BlackHoleState,
    DimerParams,
    bh_entropy,
    dimer_density,
    dimer_mutual_entropy,
    evaporation_step,
    hawking_temperature,
)
from .relclassical import (
    VelocityEnsemble,
    awng_capacity,
    boost_ensemble,
    moving_temperature,
    planar_mutual_information,
    sample_bounded_planar_ensemble,
)
from .lorentz import BoostSpec, wigner_rotation
from .relquantum import (
    SpinMomentumPacket,
    bell_pair_packet,
    boost_packet,
    gaussian_packet,
    joint_purity,
    momentum_entangled_packet,
    spin_marginal,
    wootters_concurrence,
)
from .protocols import (
    PremeasurementSpec,
    ProtocolTranscript,
    partial_information,
    premeasure,
    superdense,
    teleport,
)
from .geoment import (
    HarmonicChain,
    RegionSplit,
    entropy_chain_rule,
    geometric_entropy,
    ground_state_correlations,
    refinement_sweep,
    renyi_trace,
    replica_entropy,
)

__version__ = "0.1.0"
