"""Random-walk metrics on graphs from the fundamental tensor of a Markov chain."""

from .errors import (ConsistencyError, FailedEndpointError, MarkovTensorError, NumericalError,
                     SingularMatrixError, ValidationError)
from .fundamental import (FundamentalMatrix, FundamentalTensor, NormalizedTensor, absorption_probabilities,
                          fundamental_matrix, fundamental_tensor, incremental_fundamental, normalize_tensor,
                          tensor_via_Z)
from .graph import ExtendedGraph, Graph, TransitionMatrix, extend_graph, load_graph, read_graph, transition_matrix
from .influence import SeedSelection, c2greedy, most_influential, spread
from .metrics import hitting_costs, hitting_times, kirchhoff_index
from .reachability import ReachabilityOracle, build_oracle
from .simulate import simulate_walks

__version__ = "0.1.0"
