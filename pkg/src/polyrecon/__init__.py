"""Binary string reconstruction from substring composition multisets."""
from .codes import (
    Codebook,
    CodebookReport,
    gen_p,
    gen_q,
    gen_r,
    gen_sr,
    gen_t,
    sr_size_bounds,
    verify_codebook,
)
from .field import FieldCtx, make_ctx
from .kernels import BACKEND
from .poly import BiPoly, f_from_multiset, f_of, p_of, reciprocal, s_from_f, s_of
from .reconstruct import (
    ReconReport,
    ReconstructionError,
    l_s_of,
    pause_profile,
    reconstruct,
    reconstruct_grid,
    reconstruct_multiset,
    reconstruct_string,
)
from .strings import CompositionMultiset, MalformedInput, compose, gap_decode, gap_encode

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BiPoly", "Codebook", "CodebookReport", "CompositionMultiset", "FieldCtx",
    "MalformedInput", "ReconReport", "ReconstructionError", "compose", "f_from_multiset", "f_of",
    "gap_decode", "gap_encode", "gen_p", "gen_q", "gen_r", "gen_sr", "gen_t", "l_s_of", "make_ctx",
    "p_of", "pause_profile", "reciprocal", "reconstruct", "reconstruct_grid", "reconstruct_multiset",
    "reconstruct_string", "s_from_f", "s_of", "sr_size_bounds", "verify_codebook",
]
