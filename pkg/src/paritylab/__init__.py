"""Subgraph parity tensors of random graphs and planted-clique recovery."""

from .decomposition import (
    DiscretizedVector,
    IndicatorComponent,
    decompose,
    default_depth,
    enumerate_U,
    reconstruct,
)
from .errors import InvalidArgument, ParseError, ResourceLimitError
from .graph import (
    PlantedInstance,
    SignGraph,
    common_neighbors,
    degree_within,
    edge_sign,
    is_clique,
    plant_clique,
    planted_instance,
    read_instance,
    sample_gnp_half,
    write_instance,
)
from .maximizer import MaximizerResult, maximize, tensor_power_step, top_eigenvector
from .oracle import (
    TailEstimate,
    brute_force_max_over_U,
    brute_force_max_symmetric,
    check_partition_identity,
    check_u_approx,
    concentration_tail,
)
from .recovery import (
    RecoveryConfig,
    RecoveryReport,
    overlap_diagnostic,
    prefix_density_diagnostic,
    recover,
    simple_spectral_recover,
)
from .tensor import (
    TensorQuery,
    b_eval,
    dense_materialize,
    evaluate,
    evaluate_block,
    evaluate_symmetric,
    gradient,
    tensor_entry,
)

__version__ = "0.1.0"
