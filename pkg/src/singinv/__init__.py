"""Exact invariants of isolated hypersurface singularities at the origin."""

from .errors import (
    ArityMismatch,
    BrianconSkodaViolation,
    NonHomogeneousInput,
    NotFiniteLength,
    NotIsolated,
    NotIsolatedGlobally,
    ParseError,
    PowerCapExceeded,
    SinginvError,
    ZeroDivisorInput,
)
from .ideals import Ideal, colon_element, colon_ideal, ideal_equal, ideal_power, ideal_product, ideal_sum
from .invariants import (
    QH,
    SingularityReport,
    analyze,
    beta_invariant,
    briancon_skoda_exponent,
    chain_lengths,
    delta_length,
    find_weights,
    hilbert_samuel_fit,
    i2ji_length,
    identity_checks,
    jacobian_ideal,
    milnor_number,
    reduction_number,
    saito_membership,
    syzygy_rank_test,
    tjurina_ideal,
    tjurina_number,
)
from .parsing import parse_polynomial
from .poly import MonomialOrder, Polynomial, compare_monomials, format_polynomial
from .stdbasis import INFINITE, StandardBasis, is_member, leading_ideal, std_basis, weak_normal_form
from .syzygy import SyzygyMatrix, koszul_boundaries, module_membership, syzygies

__version__ = "0.1.0"
