"""Isogeometric finite elements for laminated plates with thickness expansions."""
from .assembly import GlobalSystem, Stabilization, apply_boundary, assemble_system, shear_stabilizer
from .cuf import ThicknessExpansion, integrate_thickness, sinus_w2
from .laminate import Lamina, Layup, rotate_to_laminate, stiffness_3d
from .nurbs import KnotVector, NurbsPatch, make_circle_patch, make_square_patch
from .solve import nondimensionalize, solve_modes, solve_static

__version__ = "0.1.0"
