"""
BigReport: one h^0 lower bound with the pieces it was assembled from.

The model refuses to exist unless
    h0_leading == specialize(chi_leading + h2_chi_correction, degree) - curve_correction
holds exactly.
"""
from __future__ import annotations

from pydantic import field_validator, model_validator

from jetbig.cohomology import LeadingForm
from jetbig.ratpoly import RationalPoly, to_decimal_str
from jetbig.schemas import FrozenModel, coerce_poly


class BigReport(FrozenModel):
    tower_level: int
    weights: str
    degree: int | str
    c: str = ""
    mode: str
    chi_leading: LeadingForm
    h2_chi_correction: LeadingForm
    curve_correction: RationalPoly
    h0_leading: RationalPoly
    threshold: int | None = None
    notes: tuple[str, ...] = ()

    @field_validator("curve_correction", "h0_leading", mode="before")
    @classmethod
    def _poly(cls, v: object) -> RationalPoly:
        return coerce_poly(v)

    @model_validator(mode="after")
    def _assembly_identity(self) -> BigReport:
        expected = ((self.chi_leading + self.h2_chi_correction).specialize_degree(self.degree)
                    - self.curve_correction)
        if expected != self.h0_leading:
            raise ValueError(
                f"h0_leading {self.h0_leading.to_text()} does not match the assembled "
                f"value {expected.to_text()}"
            )
        return self

    @property
    def n_power(self) -> int:
        return self.tower_level + 2

    def to_text(self) -> str:
        n = f"n^{self.n_power}"
        head = f"X_{self.tower_level}  {self.weights}  d={self.degree}"
        if self.c:
            head += f"  c={self.c}"
        lines = [
            f"{head}  mode={self.mode}",
            f"  chi        {n} * ({self.chi_leading.to_text()})",
            f"  h2 chi     {n} * ({self.h2_chi_correction.to_text()})",
            f"  curve      {n} * ({self.curve_correction.to_text()})",
            f"  h0 >=      {n} * ({self.h0_leading.to_text()})",
        ]
        if self.h0_leading.is_constant():
            lines.append(f"             ~ {to_decimal_str(self.h0_leading.constant_term(), 7)}")
        if self.threshold is not None:
            lines.append(f"  threshold  d >= {self.threshold}")
        if self.notes:
            lines.append("  notes:")
            lines.extend(f"    {note}" for note in self.notes)
        return "\n".join(lines)

    def to_machine(self) -> str:
        """Flat key=value lines, sorted by key, exact rationals as num/den."""
        fields = {
            "tower": str(self.tower_level),
            "weights": self.weights,
            "degree": str(self.degree),
            "c": self.c or "none",
            "mode": self.mode,
            "chi.c1sq": self.chi_leading.a.to_text(),
            "chi.c2": self.chi_leading.b.to_text(),
            "h2chi.c1sq": self.h2_chi_correction.a.to_text(),
            "h2chi.c2": self.h2_chi_correction.b.to_text(),
            "curve": self.curve_correction.to_text(),
            "h0": self.h0_leading.to_text(),
            "threshold": "none" if self.threshold is None else str(self.threshold),
        }
        for i, note in enumerate(self.notes):
            fields[f"note.{i:02d}"] = note
        return "\n".join(f"{key}={fields[key]}" for key in sorted(fields)) + "\n"
