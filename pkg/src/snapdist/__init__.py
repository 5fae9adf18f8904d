"""Snappability and intrinsic singularity distance of pin-jointed
frameworks.

The package measures how far a multistable bar/panel/tetrahedra structure
is from snapping into another stable state (snappability ``s``) and from
its nearest infinitesimally flexible configuration (singularity distance
``sigma``), both through an intrinsic strain-energy density defined on
edge lengths alone.  A Stewart-Gough specialization applies the same
machinery to parallel-manipulator joint spaces.
"""

from .critical import (BudgetError, CriticalPoint, CriticalSet,
                       build_gradient_system, classify_point, density_poly,
                       descend_flow, edge_polys, enumerate_critical_points,
                       oriented_volume_poly, transition_graph,
                       transition_graph_dot)
from .density import DensityFunction, pseudometric
from .model import (Body, Chart, Framework, FrameworkError,
                    cayley_menger_volume, compute_dimensioning)
from .poly import CompiledSystem, Poly
from .polysolve import (SolutionSet, TrackerConfig, solve_multistart,
                        solve_total_degree, track_parameter_path)
from .rigidity import (is_shaky, isostatic_check, line_complex_rank,
                       pluecker_coordinates, rigidity_matrix, self_stress)
from .singdist import (SingularityResult, check_relation,
                       global_singularity_distance,
                       local_singularity_distance, reality_check,
                       shaky_variety_critical)
from .snap import (DeformStats, PathRecord, SnapResult,
                   deformation_statistics, global_snappability,
                   local_snappability, lower_bound, separation_filter,
                   track_metric_path, undeformed_minima)
from .stewart_gough import (SGManipulator, SGPose, SGSingularityResult,
                            direct_kinematics, reconstruct_platform,
                            sg_metric_value, sg_singularity_distance)

__version__ = "0.1.0"

__all__ = [
    "Body", "BudgetError", "Chart", "CompiledSystem", "CriticalPoint",
    "CriticalSet", "DeformStats", "DensityFunction", "Framework",
    "FrameworkError", "PathRecord", "Poly", "SGManipulator", "SGPose",
    "SGSingularityResult", "SingularityResult", "SnapResult",
    "SolutionSet", "TrackerConfig", "build_gradient_system",
    "cayley_menger_volume", "check_relation", "classify_point",
    "compute_dimensioning", "deformation_statistics", "density_poly",
    "descend_flow", "direct_kinematics", "edge_polys",
    "enumerate_critical_points", "global_singularity_distance",
    "global_snappability", "is_shaky", "isostatic_check",
    "line_complex_rank", "local_singularity_distance",
    "local_snappability", "lower_bound", "oriented_volume_poly",
    "pluecker_coordinates", "pseudometric", "reality_check",
    "reconstruct_platform", "rigidity_matrix", "self_stress",
    "separation_filter", "sg_metric_value", "sg_singularity_distance",
    "shaky_variety_critical", "solve_multistart", "solve_total_degree",
    "track_metric_path", "track_parameter_path", "transition_graph",
    "transition_graph_dot", "undeformed_minima",
]
