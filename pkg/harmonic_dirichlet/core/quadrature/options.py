from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Any, Mapping

from harmonic_dirichlet.core.exceptions import InvalidQuadratureSpecError, ProblemFileError

log = logging.getLogger(__name__)

DEFAULT_ANGULAR_NODES = 512
"""Default number of angular nodes per circle before singular grading."""

DEFAULT_ANGULAR_ORDER = 8
"""Gauss-Legendre points per angular panel. The number of base panels is angular_nodes // angular_order."""

DEFAULT_RADIAL_LEVELS = 40
"""Default number of geometric annuli approaching |z| = 1."""

DEFAULT_RADIAL_ORDER = 12
"""Gauss-Legendre points per annulus in the radial direction."""

DEFAULT_REFINEMENT_FACTOR = 0.5
"""Geometric ratio between the widths of consecutive annuli."""

DEFAULT_REL_TOL = 1e-8
DEFAULT_ABS_TOL = 1e-12

DEFAULT_SINGULAR_EXCLUSION = 1e-10
"""Smallest half-width an exclusion window around a boundary singularity may shrink to."""

DEFAULT_TAIL_ANNULI = 24
"""Number of dyadic annuli profiled when judging finiteness of a disc integral."""

DEFAULT_TAIL_WINDOW = 8
"""Number of trailing annuli the tail classification looks at."""

DEFAULT_BOUNDARY_EPSILON = 1e-8
"""Radial offset 1 - r at which boundary values are extrapolated from."""

DEFAULT_LIMIT_RESIDUAL = 1e-5
"""Largest Richardson residual for which a radial limit is considered available."""

DEFAULT_SUP_RADIUS_GAP = 1e-4
"""Sup norms are sampled at radius 1 - sup_radius_gap. Callers relying on upper bounds need this to be at most 1e-4."""

DEFAULT_OUTER_GRID = 4096
"""Number of boundary samples used for outer functions and Taylor coefficients. Must be a power of two."""

DEFAULT_SUP_SEARCH_LIMIT = 1e6
"""Upper end of the search interval for the iterated logarithm constants M_n."""

DEFAULT_WORKERS = 4
"""Number of checks run concurrently by a verification sweep."""

MIN_RADIAL_GAP = 1e-14
"""Annuli thinner than this are folded into the tail estimate: 1 - d is no longer representable."""


@dataclass(frozen=True)
class QuadratureSpec:
    """
    Grids, tolerances and near-boundary refinement policy shared by every integral.

    Attributes:
        angular_nodes       : Angular nodes per circle before grading around singular angles.
        angular_order       : Gauss points per angular panel.
        radial_levels       : Number of geometric annuli for area integrals.
        radial_order        : Gauss points per annulus.
        refinement_factor   : Ratio of consecutive annulus widths, in (0, 1).
        rel_tol             : Relative tolerance.
        abs_tol             : Absolute tolerance.
        singular_exclusion  : Floor of the exclusion half-width around boundary singularities.
        tail_annuli         : Dyadic annuli profiled by tail_profile.
        tail_window         : Trailing annuli used by the tail classification.
        boundary_epsilon    : 1 - r of the outermost radius used for boundary extrapolation.
        limit_residual      : Richardson residual above which a radial limit is unavailable.
        sup_radius_gap      : 1 - r of the circle sup norms are estimated on.
        outer_grid          : Boundary sample count for outer functions and coefficient transforms.
        sup_search_limit    : Truncation point of the M_n sup search.
        workers             : Concurrent checks in verification sweeps.
    """

    angular_nodes: int = DEFAULT_ANGULAR_NODES
    angular_order: int = DEFAULT_ANGULAR_ORDER
    radial_levels: int = DEFAULT_RADIAL_LEVELS
    radial_order: int = DEFAULT_RADIAL_ORDER
    refinement_factor: float = DEFAULT_REFINEMENT_FACTOR
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL
    singular_exclusion: float = DEFAULT_SINGULAR_EXCLUSION
    tail_annuli: int = DEFAULT_TAIL_ANNULI
    tail_window: int = DEFAULT_TAIL_WINDOW
    boundary_epsilon: float = DEFAULT_BOUNDARY_EPSILON
    limit_residual: float = DEFAULT_LIMIT_RESIDUAL
    sup_radius_gap: float = DEFAULT_SUP_RADIUS_GAP
    outer_grid: int = DEFAULT_OUTER_GRID
    sup_search_limit: float = DEFAULT_SUP_SEARCH_LIMIT
    workers: int = DEFAULT_WORKERS

    def __post_init__(self) -> None:
        counts = (
            "angular_nodes",
            "angular_order",
            "radial_levels",
            "radial_order",
            "tail_annuli",
            "tail_window",
            "workers",
        )
        for name in counts:
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InvalidQuadratureSpecError(field_name=name, value=value)

        if not 0.0 < self.refinement_factor < 1.0:
            raise InvalidQuadratureSpecError(field_name="refinement_factor", value=self.refinement_factor)

        positives = ("rel_tol", "abs_tol", "singular_exclusion", "boundary_epsilon", "limit_residual", "sup_radius_gap")
        for name in positives:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidQuadratureSpecError(field_name=name, value=value)

        if self.boundary_epsilon >= 0.5 or self.sup_radius_gap >= 1.0:
            field_name = "boundary_epsilon" if self.boundary_epsilon >= 0.5 else "sup_radius_gap"
            raise InvalidQuadratureSpecError(field_name=field_name, value=getattr(self, field_name))

        if self.tail_window >= self.tail_annuli:
            raise InvalidQuadratureSpecError(
                message=f"tail_window ({self.tail_window}) must be smaller than tail_annuli ({self.tail_annuli})",
                field_name="tail_window",
                value=self.tail_window,
            )

        grid = self.outer_grid
        if not isinstance(grid, int) or grid < 16 or grid & (grid - 1):
            raise InvalidQuadratureSpecError(field_name="outer_grid", value=grid)

        if not self.sup_search_limit > 1.0:
            raise InvalidQuadratureSpecError(field_name="sup_search_limit", value=self.sup_search_limit)

    @property
    def angular_panels(self) -> int:
        """Number of uniform base panels on the circle."""
        return max(1, self.angular_nodes // self.angular_order)

    @property
    def effective_radial_levels(self) -> int:
        """Radial levels actually integrated; thinner annuli are covered by the tail estimate."""
        cap = int(math.floor(math.log(MIN_RADIAL_GAP) / math.log(self.refinement_factor)))
        return max(1, min(self.radial_levels, cap))

    def with_resolution(self, scale: int = 2) -> QuadratureSpec:
        """Returns a copy with angular nodes and radial levels multiplied by `scale`."""
        return dataclasses.replace(
            self,
            angular_nodes=self.angular_nodes * scale,
            radial_levels=self.radial_levels * scale,
        )

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], pointer: str = "") -> QuadratureSpec:
        """
        Builds a spec from its JSON object, rejecting unknown keys.

        Args:
            data    : Mapping of field names to values. Missing fields take their defaults.
            pointer : JSON pointer of `data` inside the enclosing document, used in error messages.

        Raises:
            ProblemFileError: On unknown keys, wrong types or out-of-range values.
        """
        if not isinstance(data, Mapping):
            raise ProblemFileError(pointer=pointer, reason="quadrature spec must be an object")

        known = {f.name: f for f in dataclasses.fields(cls)}
        kwargs: dict[str, Any] = {}
        for key, value in data.items():
            if key not in known:
                raise ProblemFileError(pointer=f"{pointer}/{key}", reason="unknown quadrature field")

            default = known[key].default
            if isinstance(default, int) and not isinstance(default, bool):
                if isinstance(value, bool) or not isinstance(value, int):
                    raise ProblemFileError(pointer=f"{pointer}/{key}", reason="expected an integer")
            elif isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ProblemFileError(pointer=f"{pointer}/{key}", reason="expected a number")
            else:
                value = float(value)
            kwargs[key] = value

        try:
            spec = cls(**kwargs)
        except InvalidQuadratureSpecError as exc:
            raise ProblemFileError(pointer=f"{pointer}/{exc.field_name}", reason=str(exc)) from exc

        log.debug("Loaded quadrature spec %s", spec)
        return spec
