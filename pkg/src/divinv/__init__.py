"""Invariants of GL_n in divided power algebras and truncated coordinate rings
over finite fields."""

from .modarith import PrimeCtx, binom_mod_p, gamma_compose_coeff, nu_p_factorial, prime_ctx
from .partitions import CyclePattern, MultiPartition, Partition, YoungData
from .divpow import DPElement, IntPoly, VarSet, dp_gamma, dp_mul, matrix_varset
from .tensorinv import CycleTypeSum, PermClassSum, class_sum, to_dp_element
from .symmfunc import MatrixVarCtx, VecCovecCtx, divided_family, named_invariant
from .invsolver import (CapExceeded, build_module, group_invariants, lie_invariants, restrict,
                        span, subspace_compare)

__version__ = "0.1.0"
