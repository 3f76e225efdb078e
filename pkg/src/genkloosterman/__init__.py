"""Generalized Kloosterman sums over étale quadratic algebras."""
from .cyclotomic import CycValue, cyc_normalize
from .padic import PadicScalar, PrecisionError, PrimePower, RootOfUnity, inv_mod, padic_log, psi_p
from .quadratic import EtaleQuadratic, QuadElement, conj, in_ZU1, log_L, norm, psi_L, trace
from .characters import (TameDataUnavailable, ThetaChar, UnitCharacter, alpha_family,
                         eval_theta, family_average, family_index)
from .kloosterman import crt_inverse, gauss_sum, kl_global, kl_local, kl_local_exact, ramanujan
from .genkl import (Constants, GpParams, constants, g_global, g_global_exact, gp, gp_average,
                    gp_principal, gp_supercuspidal, support_status)
from .dualsum import WhittakerProfile, dual_bound, gtilde, in_dual_support, whittaker_profile
from .trace import (GeometricSide, SchemaError, SpectralDataset, SpectralEntry, bessel_j,
                    dump_spectral, geometric_side, load_spectral, petersson_residual)

__all__ = [
    "CycValue",
    "cyc_normalize",
    "PadicScalar",
    "PrecisionError",
    "PrimePower",
    "RootOfUnity",
    "inv_mod",
    "padic_log",
    "psi_p",
    "EtaleQuadratic",
    "QuadElement",
    "conj",
    "in_ZU1",
    "log_L",
    "norm",
    "psi_L",
    "trace",
    "TameDataUnavailable",
    "ThetaChar",
    "UnitCharacter",
    "alpha_family",
    "eval_theta",
    "family_average",
    "family_index",
    "crt_inverse",
    "gauss_sum",
    "kl_global",
    "kl_local",
    "kl_local_exact",
    "ramanujan",
    "Constants",
    "GpParams",
    "constants",
    "g_global",
    "g_global_exact",
    "gp",
    "gp_average",
    "gp_principal",
    "gp_supercuspidal",
    "support_status",
    "WhittakerProfile",
    "dual_bound",
    "gtilde",
    "in_dual_support",
    "whittaker_profile",
    "GeometricSide",
    "SchemaError",
    "SpectralDataset",
    "SpectralEntry",
    "bessel_j",
    "dump_spectral",
    "geometric_side",
    "load_spectral",
    "petersson_residual",
]

__version__ = "0.1.0"
