"""Shared pydantic base for the value objects that cross module boundaries."""
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict

from jetbig.ratpoly import RationalPoly, as_fraction


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def coerce_poly(value: Any) -> RationalPoly:
    """field_validator(mode="before") helper: ints, Fractions and strings become polys."""
    if isinstance(value, RationalPoly):
        return value
    if isinstance(value, str):
        return RationalPoly.parse(value)
    return RationalPoly.const(as_fraction(value))


def coerce_fraction(value: Any) -> Fraction:
    return as_fraction(value)
