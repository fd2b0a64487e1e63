"""Exact-rational score cells and their fixed-point rendering."""

from __future__ import annotations

from fractions import Fraction


def ratio(numerator: int, denominator: int) -> Fraction | None:
    """A score cell: ``None`` (rendered "-") when the denominator is zero."""
    if denominator == 0:
        return None
    return Fraction(numerator, denominator)


def format_ratio(value: Fraction | None, places: int = 3) -> str:
    """Render a rational at fixed precision, rounding halves up; None -> "-".

    Rounding happens here and only here: upstream arithmetic stays exact, so
    0.6665 at 3 places is "0.667" regardless of any binary-float artifacts.
    """
    if value is None:
        return "-"
    if value < 0:
        raise ValueError(f"score cells are non-negative, got {value}")
    scaled = value * 10**places
    units, remainder = divmod(scaled.numerator, scaled.denominator)
    if 2 * remainder >= scaled.denominator:
        units += 1
    whole, frac = divmod(units, 10**places)
    return f"{whole}.{frac:0{places}d}" if places else str(whole)
