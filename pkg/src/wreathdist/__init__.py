"""Word length and subgroup distortion in wreath products ``A wr Z^d``."""
from .algebra import FgAbelianGroup, LaurentPoly, parse_poly
from .distortion import (ExponentCertificate, IntPoly, coefficient_bound_check, companion_matrix,
                         distortion_exponent, poly_distortion_exact, squarefree_decomp,
                         unit_circle_root_count, witness_family)
from .exemplary import (ExemplarySubgroup, SubgroupElementCoords, delta_exact, embed, exemplary_len,
                        exemplary_member)
from .reduction import LaurentMatrix, predicted_exponent, shift_gen_reduction, snf_laurent
from .report import fit_slope, sweep
from .wreath import WreathElement, WreathGroup, bfs_ball, wr_len_closed, wr_len_trace, wr_length

__version__ = "0.1.0"

__all__ = [
    "FgAbelianGroup", "LaurentPoly", "parse_poly",
    "ExponentCertificate", "IntPoly", "coefficient_bound_check", "companion_matrix", "distortion_exponent",
    "poly_distortion_exact", "squarefree_decomp", "unit_circle_root_count", "witness_family",
    "ExemplarySubgroup", "SubgroupElementCoords", "delta_exact", "embed", "exemplary_len", "exemplary_member",
    "LaurentMatrix", "predicted_exponent", "shift_gen_reduction", "snf_laurent",
    "fit_slope", "sweep",
    "WreathElement", "WreathGroup", "bfs_ball", "wr_len_closed", "wr_len_trace", "wr_length",
]
