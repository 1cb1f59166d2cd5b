"""radial-lab: exact dyadic geometry experiments on the unit square.

Cube families, Frostman-type non-concentration certificates, point-line
duality with tube-cube incidence counting, radial and orthogonal
projection box-dimension estimates, and the closed-form bound algebra
they are measured against.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundQuery,
    DominanceReport,
    bound_main,
    bound_orthogonal_exceptional,
    bound_osw1,
    bound_osw2,
    coupled_fixed_point,
    dominance_report,
    incidence_exponent,
)
from .duality import (
    Direction,
    Line,
    Tube,
    direction_between,
    dual_of_point,
    line_through,
    tube_meets_cube,
    tube_of_param_cube,
)
from .dyadic import (
    CubeSet,
    DyadicCube,
    Point2,
    ancestor,
    box_count,
    cube_of_point,
    cubes_in_ball,
)
from .frostman import (
    BranchingProfile,
    FrostmanCertificate,
    Witness,
    branching_profile,
    check_ball_frostman,
    check_dyadic_frostman,
    extract_uniform_subset,
    max_dyadic_exponent,
)
from .generators import (
    GenerationError,
    GeneratorSpec,
    build,
    cantor_dimension,
    cantor_product,
    full_grid,
    graph_set,
    line_set,
    random_tree_set,
)
from .incidence import (
    IncidenceRecord,
    TubeSet,
    ValidationError,
    count_incidences,
    count_tubes_through_cube,
    renwang_harness,
    union_tubes,
)
from .projection import (
    DimensionEstimate,
    DirectionSet,
    SupRadialResult,
    estimate_dimension,
    orthogonal_project,
    radial_project,
    sup_radial_dimension,
)
from .storage import SetFileError, load_cube_set, load_set, load_tube_set, save_set

__all__ = [name for name in dir() if not name.startswith("_")]
