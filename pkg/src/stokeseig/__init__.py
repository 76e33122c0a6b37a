"""Dirichlet eigenvalues of the planar Stokes operator via boundary integral
equations, located as zeros of a discretized Fredholm determinant."""

from .special import RadialKernelValues, bessel_j, gbh_radial, hankel1
from .geometry import (
    BoundaryPanels,
    CurveComponent,
    GeometryError,
    make_annulus,
    make_barbell,
    make_circle,
    make_starfish_domain,
    panelize,
)
from .potentials import Kernel2x2, KernelContext, stokeslet, stresslet_normal, w_apply
from .quadrature import QuadratureError, assemble_layer_matrix, eval_offsurface
from .operator import SystemMatrix, build_system, smallest_singular_values
from .detsweep import (
    ChebInterpolant,
    EigenReport,
    SweepResult,
    det_at,
    find_roots,
    fit_function,
    fit_interval,
    postprocess,
    sweep,
)
from .reference import (
    TranscendentalRoots,
    annulus_dirichlet_roots,
    annulus_eigenfunction,
    disk_neumann_roots,
)
from .eigenfield import EigenfieldGrid, GridSpec, eval_eigenfield
from .config import RunConfig

__all__ = [
    "RadialKernelValues",
    "bessel_j",
    "gbh_radial",
    "hankel1",
    "BoundaryPanels",
    "CurveComponent",
    "GeometryError",
    "make_annulus",
    "make_barbell",
    "make_circle",
    "make_starfish_domain",
    "panelize",
    "Kernel2x2",
    "KernelContext",
    "stokeslet",
    "stresslet_normal",
    "w_apply",
    "QuadratureError",
    "assemble_layer_matrix",
    "eval_offsurface",
    "SystemMatrix",
    "build_system",
    "smallest_singular_values",
    "ChebInterpolant",
    "EigenReport",
    "SweepResult",
    "det_at",
    "find_roots",
    "fit_function",
    "fit_interval",
    "postprocess",
    "sweep",
    "TranscendentalRoots",
    "annulus_dirichlet_roots",
    "annulus_eigenfunction",
    "disk_neumann_roots",
    "EigenfieldGrid",
    "GridSpec",
    "eval_eigenfield",
    "RunConfig",
]
