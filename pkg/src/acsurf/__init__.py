"""Allen-Cahn phase-field pattern synthesis on triangulated surfaces.

A numpy/scipy toolkit for the tilted Allen-Cahn reaction-diffusion
equation u_t = lap(u) - (u^3 - u + b)/eps^2 on closed triangle meshes:
cotangent Laplace-Beltrami discretization, Strang operator splitting with
an exact reaction flow, energy monitoring, one-dimensional stationary
analysis, and pattern classification (spots / inverted spots / stripes /
uniform) as a function of the reaction offset b.
"""

from .mesh import (
    DegenerateFaceError,
    EdgeWeights,
    MeshError,
    MeshParseError,
    MeshTopologyError,
    TriangleMesh,
    cotan_weights,
    load_mesh,
    save_obj,
    save_off,
    vertex_areas,
)
from .generators import grid_patch, hex_patch, icosphere, tetrahedron
from .operators import (
    LinearSolveError,
    LinearSolveSettings,
    SurfaceOperator,
    assemble_stiffness,
    build_diffusion_system,
    cg_solve,
    diffusion_step,
    laplacian_apply,
)
from .reaction import ReactionStepParams, reaction_bound_holds, reaction_half_step
from .solver import (
    EnergyTrace,
    PhaseField,
    SolverAbort,
    SolverConfig,
    discrete_energy,
    double_well,
    run,
    strang_step,
)
from .one_dim import (
    FirstIntegral,
    Profile1D,
    QuadratureDomainError,
    concavity_sign,
    conserved_potential,
    first_integral,
    integrate_stationary,
    kink_profile,
    quadrature_solution,
    stable_roots,
    tanh_front_residual,
)
from .patterns import (
    LocalityScore,
    PatternReport,
    SupportRegion,
    classify,
    compare_pattern_stats,
    dilate_region,
    hop_ball,
    localized_init,
    locality_score,
    random_init,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
