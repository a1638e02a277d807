"""Values of nonlocal games: classical enumeration, XOR-game SDPs and
optimality checks for explicit quantum strategies."""
from ._backend import BACKEND
from .classical import (
    DeterministicStrategy,
    EnumerationCapError,
    complete_graph_crosscheck,
    local_value,
    max_c_cut,
    sync_local_value,
)
from .games import (
    Game,
    GameInstance,
    Graph,
    PriorDistribution,
    XorGame,
    coloring_game,
    is_symmetric,
    is_synchronous,
    product_game,
    seyed_game,
    uniform_edge_prior,
    xor_sum,
)
from .sdp import SdpSolution, solve_elliptope
from .strategies import Density, PovmFamily, PvmFamily, density_from_pvm, game_value
from .xor import (
    UncertifiedSolutionError,
    bias_report,
    cost_matrices,
    graph_corr_half,
    quantum_max_cut2,
    xor_sync_value,
    xor_value,
)

__version__ = "0.1.0"
