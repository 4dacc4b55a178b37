"""Affine invariants of surface immersions in R^4.

Computes second fundamental forms, the semiconformal structure and the
cubic form of an immersion with transversal bundle, classifies the pencil
(h3, h4) into the seven surface types via the Minkowski-space picture, and
verifies the three families of 1-degenerate parallel ruled surfaces on
numerical grids.
"""

__version__ = "0.1.0"

from .errors import (AffSurf4Error, DegenerateCoefficient, DegenerateCurve,
                     DegenerateDivisor, DomainError, ExprSyntaxError,
                     InsufficientOrder, InvalidOrder, NotNormalized,
                     SceneError, SingularFrame, SingularTransform,
                     UnboundVariable)
from .jets import Jet1, Jet2
from .linalg import Sym2, det4, solve4
from .pencil import (NormalizationResult, PencilType, PhiClass,
                     classify_pencil, classify_phi, normalize_pencil,
                     rho1_apply, rho2_apply, semiconformal_matrix)
from .immersion import (CubicForm, FramePoint, FundamentalData, cubic_form,
                        decompose_frame, frame_from_surface,
                        parallel_check_relations, surface_type_at,
                        transform_frame)
from .families import (FamilyI1, FamilyI2, FamilyII, VerificationReport,
                       curve_coefficients, family_christoffels, family_frame,
                       verify_family)
from .expr import CurveDef, SurfaceDef, evaluate, parse
