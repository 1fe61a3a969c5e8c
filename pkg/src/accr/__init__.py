"""Numerical verification toolkit for almost contact complex Riemannian
manifolds: concrete models, structure and curvature tensors, and every
identity of the theory as a quantified residual check."""

from .conformal import (
    TransformParams,
    apply_cct,
    eta_complex_einstein_check,
    homothetic_connection,
    homothetic_curvature_and_ricci,
    preservation_residuals,
)
from .connection import (
    gauss_residual,
    hsphere_curvature,
    levi_civita,
    riemann,
)
from .corpus import BUILTINS, builtin, cross_representation_check, default_corpus
from .frame_algebra import (
    FrameTensor,
    MetricMatrix,
    Signature,
    kulkarni_nomizu,
    metric_inverse,
    trace_with_signature,
)
from .models import (
    HolomorphicBase,
    chart_model,
    cone_model,
    lie_group_model,
    product_extension,
)
from .sasaki import (
    check_corollary,
    check_curvature_identities,
    check_defining_conditions,
    check_nabla_phi,
    check_nijenhuis_form,
    cone_holomorphic_residual,
    sasaki_report,
)
from .structure import (
    AccrStructure,
    fundamental_F,
    nijenhuis,
    standard_structure,
    theorem_3_4_residual,
    validate_structure,
)
from .verify import VerifyConfig, report_to_json, run_all

__version__ = "0.1.0"
