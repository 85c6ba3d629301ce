"""Threshold decomposition of labels and features.

An integer label m in a LabelSet is equivalent to the non-increasing Boolean
tuple x(l) = 1 iff m >= m(l), via m = m(0) + sum_l a_l x(l).  Features
decompose the same way at every integer threshold, and averaging the feature
indicators over each gap (m(l-1), m(l)] yields the per-level targets z(l).
The absolute data term then splits into one Boolean-valued problem per level
plus a constant that depends on the features alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import EdgeSet, FeatureField, LabelSet, ValidationError


@dataclass(frozen=True)
class LevelVector:
    """Per-pixel targets z_i(l) in [0, 1] for one level.

    `denom` is the level gap a_l; every z_i is an exact rational whose
    denominator divides it, so z_i * denom is always an integer.
    """

    level: int
    denom: int
    z: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(Fraction(v) for v in self.z))
        if self.level < 1:
            raise ValidationError("level indices start at 1")
        if self.denom < 1:
            raise ValidationError("level gap must be at least 1")
        for v in self.z:
            if not 0 <= v <= 1:
                raise ValidationError(f"z value {v} outside [0, 1]")
            if (v * self.denom).denominator != 1:
                raise ValidationError(
                    f"z value {v} is not a multiple of 1/{self.denom}"
                )

    def scaled(self) -> tuple[int, ...]:
        """The integers z_i * denom (threshold counts inside the gap)."""
        return tuple(int(v * self.denom) for v in self.z)


def threshold_decompose(value: int, max_feature: int) -> tuple[int, ...]:
    """Indicators (1 iff value >= tau) for tau = 1..max_feature."""
    if not 0 <= value <= max_feature:
        raise ValidationError(
            f"value {value} outside [0, {max_feature}]"
        )
    return tuple(1 if value >= tau else 0 for tau in range(1, max_feature + 1))


def compose_label(labels: LabelSet, x: Sequence[int]) -> int:
    """Rebuild the label m(0) + sum_l a_l x(l) from level indicators.

    `x` must be non-increasing; this is the inverse of thresholding a label
    at each m(l).
    """
    bits = tuple(int(b) for b in x)
    if len(bits) != labels.k:
        raise ValidationError(f"expected {labels.k} indicators, got {len(bits)}")
    if any(b not in (0, 1) for b in bits):
        raise ValidationError("indicators must be 0 or 1")
    if any(a < b for a, b in zip(bits, bits[1:])):
        raise ValidationError(f"indicators not non-increasing: {bits}")
    return labels.levels[0] + sum(a * b for a, b in zip(labels.gaps, bits))


def _gap_count(feature: int, low: int, gap: int) -> int:
    """Number of thresholds in (low, low + gap] at or below `feature`."""
    return min(max(feature - low, 0), gap)


def z_vectors(field: FeatureField, labels: LabelSet) -> list[LevelVector]:
    """The per-level target vectors z(1..k).

    z_i(l) is the fraction of thresholds in (m(l-1), m(l)] that feature i
    reaches.  Coordinatewise z(1) >= ... >= z(k), and each pixel's profile is
    a run of ones, at most one fractional value, then zeros.
    """
    out = []
    for l in range(1, labels.k + 1):
        low = labels.levels[l - 1]
        gap = labels.gaps[l - 1]
        z = tuple(
            Fraction(_gap_count(f, low, gap), gap) for f in field.features
        )
        out.append(LevelVector(level=l, denom=gap, z=z))
    return out


def abs_identity_check(
    nu: int, feature: int, labels: LabelSet
) -> tuple[int, int]:
    """Both sides of the absolute-deviation split for one (label, feature) pair.

    The left side is |nu - feature|.  The right side is the boundary term
    below m(0), plus one gap-sized term per level, plus the boundary term
    above m(k).  The two must always agree; tests use this as an oracle, and
    the boundary terms are exactly the constant that the per-level energies
    leave out.
    """
    if nu not in labels:
        raise ValidationError(f"label {nu} not in label set {labels.levels}")
    if not 0 <= feature <= labels.max_feature:
        raise ValidationError(
            f"feature {feature} outside [0, {labels.max_feature}]"
        )
    m0 = labels.levels[0]
    mk = labels.levels[-1]
    lhs = abs(nu - feature)
    rhs = abs(m0 - min(feature, m0))
    for l in range(1, labels.k + 1):
        low = labels.levels[l - 1]
        gap = labels.gaps[l - 1]
        indicator = 1 if nu >= labels.levels[l] else 0
        rhs += abs(gap * indicator - _gap_count(feature, low, gap))
    rhs += max(feature - mk, 0)
    return lhs, rhs


def boundary_constant(field: FeatureField, labels: LabelSet) -> Fraction:
    """Feature-only energy outside [m(0), m(k)], omitted by the level problems.

    Equals sum_i weight_i * (max(m(0) - f_i, 0) + max(f_i - m(k), 0)); added
    to the weighted sum of level energies it restores the full absolute
    deviation energy for every labeling.
    """
    m0 = labels.levels[0]
    mk = labels.levels[-1]
    total = Fraction(0)
    for f, w in zip(field.features, field.weights):
        total += w * (max(m0 - f, 0) + max(f - mk, 0))
    return total


def u_level(
    level: int,
    b: Sequence[int],
    z: LevelVector,
    field: FeatureField,
    edges: EdgeSet,
) -> Fraction:
    """Exact Boolean energy at one level.

    Sum of weight_i * |z_i - b_i| plus coupling_ij * |b_i - b_j|.
    """
    if z.level != level:
        raise ValidationError(f"level vector is for level {z.level}, not {level}")
    bits = tuple(int(v) for v in b)
    if len(bits) != field.n or len(z.z) != field.n:
        raise ValidationError("assignment, targets, and field sizes differ")
    if any(v not in (0, 1) for v in bits):
        raise ValidationError("assignment must be 0/1 valued")
    total = Fraction(0)
    for w, zi, bi in zip(field.weights, z.z, bits):
        total += w * abs(zi - bi)
    for i, j, beta in edges.arcs:
        total += beta * abs(bits[i] - bits[j])
    return total
