"""Exact-arithmetic toolkit for the Markoff equation.

Everything is computed over arbitrary-precision integers and exact
rationals; no floating point anywhere.  The subpackages cover the tree of
normalized solutions, their triangular-matrix arrangements and the
SL(3, Z) calculus connecting them, the attached nilpotent matrices, the
rational isomorph family between common-m contexts, and the divisibility
machinery behind the uniqueness of dominant members.
"""

__version__ = "0.1.0"

from .arrangements import (
    Arrangement,
    AdmissibleTriple,
    admissible_at,
    branch_step,
    coefficient_columns,
    generator_p,
    generator_q,
    mt_arrangements,
    root_isomorph,
    signed_reflect,
    tree_isomorph,
    triangular,
)
from .divisibility import (
    FGFactorization,
    cross_term_identity,
    factorize,
    fg_factorization,
    lemma_audit,
)
from .isomorph import (
    CongruenceReplay,
    Decompositions,
    IsomorphFamily,
    IsomorphParams,
    PairContext,
    congruence_replay,
    conic_arrangements,
    cross_context,
    decompositions,
    find_integral_parameter,
    make_pair_context,
    n_isomorph,
    same_arrangement_context,
    solve_params,
    t_factors,
    t_matrix,
)
from .linalg import IDENTITY, Mat2, Mat3, SHIFT, char_poly3, exp_half_r, inverse3
from .nilpotent import NilpotentKit, defect, h_matrix, r_matrix, s_matrix
from .tree import (
    MarkoffTriple,
    ROOT,
    children,
    enumerate_below,
    from_classical,
    is_markoff,
    parent,
    path_to,
    to_classical,
    verify_uniqueness,
    walk_path,
)
