"""Exact finite models of generalized affine buildings and axiom checkers."""

__version__ = "0.1.0"

from .lambda_core import LEX, Q, Z, LambdaSpec, Scalar, compare  # noqa: E402
from .coxeter import build_root_system, enumerate_weyl_group, gallery_distance, reflect  # noqa: E402
from .model_space import AffineMap, ConvexRegion, HalfSpace, Point, WeylSimplex, metric  # noqa: E402
from .atlas import BPoint, BuildingInstance, ec_closure, generate, load, save, star, star_seed, thin, \
    validate_atlas  # noqa: E402
from .reports import CheckReport  # noqa: E402

__all__ = [
    "LEX", "Q", "Z", "LambdaSpec", "Scalar", "compare",
    "build_root_system", "enumerate_weyl_group", "gallery_distance", "reflect",
    "AffineMap", "ConvexRegion", "HalfSpace", "Point", "WeylSimplex", "metric",
    "BPoint", "BuildingInstance", "ec_closure", "generate", "load", "save", "star", "star_seed", "thin",
    "validate_atlas", "CheckReport",
]
