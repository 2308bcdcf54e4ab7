"""Self-stresses of planar tensegrities whose vertices are points or scalar fields."""

from .classical import (
    ClassicalFramework,
    Graph,
    StressBasis,
    StressVector,
    equilibrium_matrix,
    form_residual,
    projective_transform,
)
from .documents import dumps, parse_document, parse_framework, parse_scene
from .errors import (
    DegenerateHessian,
    IdenticallyZeroField,
    NoCriticalPoints,
    NonMorseField,
    NumericError,
    ParseError,
    PointAtInfinity,
    ValidationError,
    ZeroGradientField,
)
from .field import BBox, CriticalPoint, Point2, ScalarField, find_critical_points, gradient, morse_index
from .forcelines import ForceLine, Polyline, classify, jacobian_field, trace_zero_set
from .forms import OneForm, TwoForm, field_form_at, point_form, wedge
from .morse import Scene, assemble, paraboloid_lift, verify

__version__ = "0.1.0"
