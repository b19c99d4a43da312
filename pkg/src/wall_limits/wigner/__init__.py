"""Phase-space (Wigner-function) side: quadrature, closed forms, star
products, residue sums and the large-alpha convergence study."""
from .closed_form import halfline_normalization, rho_halfline_robin, sinc2
from .moyal import (SymbolTerm, canonical, conjugate, evaluate, moyal_star, moyal_star_truncated,
                    morse_hamiltonian, star_commutator, star_eigen_residual, term)
from .quadrature import gk15, wigner_grid, wigner_transform
from .residues import (ResidueSeries, TailTooLargeError, contour_quadrature, eval_star_solution_residues,
                       mellin_whittaker)
from .study import align, convergence_study, limit_phase, morse_wigner_grid
from .types import PhaseSpaceField, PhaseSpacePoint, StarPair

__all__ = [
    "PhaseSpaceField", "PhaseSpacePoint", "ResidueSeries", "StarPair", "SymbolTerm", "TailTooLargeError",
    "align", "canonical", "conjugate", "contour_quadrature", "convergence_study", "eval_star_solution_residues",
    "evaluate", "gk15", "halfline_normalization", "limit_phase", "mellin_whittaker", "morse_hamiltonian",
    "morse_wigner_grid", "moyal_star", "moyal_star_truncated", "rho_halfline_robin", "sinc2",
    "star_commutator", "star_eigen_residual", "term", "wigner_grid", "wigner_transform",
]
