"""Exact sheaf cohomology for rigidity of graph-of-groups realisations."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, ConsistencyError, PreconditionError, SheafrigError
from .graphs import (
    ExtensionMove,
    Hypergraph,
    IncidenceGraph,
    Multigraph,
    apply_extension,
    decompose_tight,
    generate_tight,
    incidence_graph,
    is_sparse,
    multiply_edges,
)
from .subspaces import LinearForm, ProjectionOperator, Subspace
from .sheaf import CellularSheaf, CohomologyReport, cohomology, coboundary, constant_sheaf, restrict
from .motion import MotionSheafSpec, RigidityVerdict, analyze, build_motion_sheaf, maxwell_defect
