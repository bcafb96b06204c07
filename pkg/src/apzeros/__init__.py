"""Certified zeros of almost-periodic sums built from zeta-zero ordinates.

Workflow: a fast float Newton scan proposes zeros of the truncated sum with
large imaginary part; ball arithmetic then certifies one zero of the full
sum (argument principle plus tail bounds), bounds the truncated sum's
minimum modulus on a rectangle around it, and derives a machine-checkable
lower bound for the density of such zeros, hence for the sign-change density
constant the package exists to reproduce.
"""

from .balls import (
    ComplexBall,
    Comparison,
    InconclusiveEnclosure,
    PrecisionExhausted,
    RealBall,
    ball_compare,
    run_with_ladder,
)
from .certificate import (
    Certificate,
    assemble_certificate,
    certificate_from_dict,
    certificate_to_dict,
    read_certificate_dict,
    verify_certificate_dict,
    verify_certificate_file,
    write_certificate,
)
from .fsum import (
    PhiShape,
    TruncatedSum,
    ZeroFreeVerdict,
    eval_FN,
    eval_FN_deriv,
    eval_FN_modulus,
    eval_FN_pair,
    lehman_bound,
    tail_bound_partial_rh,
    tail_bound_rh,
    zero_free_check,
)
from .rigor import (
    ContourBounds,
    VerifiedZero,
    contour_alpha,
    contour_constants,
    refine_candidate,
    rouche_verify,
    run_certification,
    solve_q0,
    solve_q0_legacy,
    winding_number,
)
from .search import (
    Candidate,
    ContourProposal,
    newton_scan,
    propose_contour,
    rank_candidates,
    sweep_N,
)
from .zerotable import (
    ZeroTable,
    ZetaZero,
    coefficient,
    load_bundled_certify_table,
    load_bundled_search_table,
    load_zero_table,
    write_zero_table,
)

__version__ = "0.1.0"
