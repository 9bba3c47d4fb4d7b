"""Exact K-theory bookkeeping for unital extensions of UCT Kirchberg algebras."""

from .fgab import (
    BoundExceeded,
    FgGroup,
    GroupElement,
    GroupHom,
    IntMatrix,
    PointedGroup,
    cokernel,
    ext_group,
    extension_middle,
    hom_group,
    invariant_factors,
    kernel,
    pointed_iso,
    smith_normal_form,
)
from .kinv import (
    KInvariant,
    cone_of_unit,
    cuntz_invariant,
    cuntz_krieger_invariant,
    standard_model,
)
from .kkuct import check_exactness, dual_group_check, dual_invariant, kk_group
from .extgrp import (
    ExtClassCoords,
    StrongExtGroup,
    dfrak_invariant,
    ext_strong,
    ext_weak,
    extension_k_invariant,
    skase_six_term,
    strong_class,
    toeplitz_class,
)
from .strongdual import (
    DualityReport,
    ExtensionDatum,
    NoSolutionWithinBounds,
    matsumoto_pair,
    solve_dual_extension,
    verify_strong_duality,
)

__all__ = [
    "BoundExceeded", "FgGroup", "GroupElement", "GroupHom", "IntMatrix", "PointedGroup",
    "cokernel", "ext_group", "extension_middle", "hom_group", "invariant_factors", "kernel",
    "pointed_iso", "smith_normal_form",
    "KInvariant", "cone_of_unit", "cuntz_invariant", "cuntz_krieger_invariant", "standard_model",
    "check_exactness", "dual_group_check", "dual_invariant", "kk_group",
    "ExtClassCoords", "StrongExtGroup", "dfrak_invariant", "ext_strong", "ext_weak",
    "extension_k_invariant", "skase_six_term", "strong_class", "toeplitz_class",
    "DualityReport", "ExtensionDatum", "NoSolutionWithinBounds", "matsumoto_pair",
    "solve_dual_extension", "verify_strong_duality",
]
