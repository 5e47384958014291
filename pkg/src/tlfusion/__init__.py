"""Finite and affine Temperley-Lieb algebras: standard modules, fusion by induction and its axioms."""

__version__ = "0.1.0"

from .scalars import ConfigError, DegenerateScalar, Field  # noqa: E402
from .linalg import Matrix  # noqa: E402
from .modules import ModuleRep, bar_module, standard_affine, standard_finite, verify_module  # noqa: E402
from .fusion import (FusionOutcome, fuse_affine, fuse_affine_bounded, fuse_affine_hecke,  # noqa: E402
                     fuse_finite, globalize, scan_resonances)
from .identify import decompose_generic, identify_affine  # noqa: E402

__all__ = [
    "ConfigError", "DegenerateScalar", "Field", "Matrix", "ModuleRep", "bar_module", "standard_affine",
    "standard_finite", "verify_module", "FusionOutcome", "fuse_affine", "fuse_affine_bounded",
    "fuse_affine_hecke", "fuse_finite", "globalize", "scan_resonances", "decompose_generic",
    "identify_affine", "__version__",
]
