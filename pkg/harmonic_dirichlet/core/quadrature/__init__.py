from .circle import circle_integral
from .disc import disc_integral, tail_profile
from .options import QuadratureSpec
from .points import CircleIntegrand, DiscIntegrand, DiscPoints
from .result import CircleResult, QuadratureResult, TailProfile

__all__ = [
    "CircleIntegrand",
    "CircleResult",
    "DiscIntegrand",
    "DiscPoints",
    "QuadratureResult",
    "QuadratureSpec",
    "TailProfile",
    "circle_integral",
    "disc_integral",
    "tail_profile",
]
