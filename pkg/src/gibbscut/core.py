"""Model data types, instance validation, and exact energy evaluation.

Instances are triples (FeatureField, LabelSet, EdgeSet).  All weights are
rationals held as `fractions.Fraction`, and every energy computed here is
exact; nothing in the optimization path touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence


class GibbsCutError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GibbsCutError, ValueError):
    """An input violates a model invariant."""


class InternalInvariantError(GibbsCutError):
    """A structural guarantee failed.  Indicates a bug, not bad input."""


def _as_weight(value) -> Fraction:
    if isinstance(value, Rational):
        return Fraction(value)
    raise ValidationError(f"weight must be a rational number, got {value!r}")


@dataclass(frozen=True)
class LabelSet:
    """The admissible cluster labels, strictly increasing within [0, max_feature].

    `levels` is the tuple (m(0), ..., m(k)); `gaps` are the per-level widths
    a_l = m(l) - m(l-1) for l = 1..k.
    """

    levels: tuple[int, ...]
    max_feature: int

    def __post_init__(self):
        levels = tuple(int(v) for v in self.levels)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "max_feature", int(self.max_feature))
        if self.max_feature < 0:
            raise ValidationError("max_feature must be nonnegative")
        if not levels:
            raise ValidationError("label set must contain at least one label")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValidationError(f"labels not strictly increasing: {levels}")
        if levels[0] < 0 or levels[-1] > self.max_feature:
            raise ValidationError(
                f"labels {levels} outside feature range [0, {self.max_feature}]"
            )

    @property
    def k(self) -> int:
        """Number of levels; the label count is k + 1."""
        return len(self.levels) - 1

    @property
    def gaps(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.levels, self.levels[1:]))

    def __contains__(self, label) -> bool:
        return label in self.levels


@dataclass(frozen=True)
class FeatureField:
    """Per-pixel integer features and nonnegative rational data weights."""

    features: tuple[int, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        features = tuple(int(v) for v in self.features)
        weights = tuple(_as_weight(w) for w in self.weights)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "weights", weights)
        if not features:
            raise ValidationError("feature field must contain at least one pixel")
        if len(features) != len(weights):
            raise ValidationError(
                f"{len(features)} features but {len(weights)} weights"
            )
        if any(f < 0 for f in features):
            raise ValidationError("feature values must be nonnegative")
        if any(w < 0 for w in weights):
            raise ValidationError("data weights must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.features)


@dataclass(frozen=True)
class EdgeSet:
    """Directed weighted arcs (i, j, coupling).

    Self-loops are rejected and duplicate arcs for the same ordered pair are
    merged by summing their couplings.  Arcs are stored sorted by (i, j) so
    two EdgeSets built from the same multiset of arcs compare equal.
    """

    arcs: tuple[tuple[int, int, Fraction], ...]

    def __post_init__(self):
        merged: dict[tuple[int, int], Fraction] = {}
        for i, j, beta in self.arcs:
            i, j = int(i), int(j)
            beta = _as_weight(beta)
            if i == j:
                raise ValidationError(f"self-loop arc ({i}, {j}) is not allowed")
            if i < 0 or j < 0:
                raise ValidationError(f"negative pixel index in arc ({i}, {j})")
            if beta < 0:
                raise ValidationError(f"negative coupling on arc ({i}, {j})")
            merged[i, j] = merged.get((i, j), Fraction(0)) + beta
        object.__setattr__(
            self, "arcs", tuple((i, j, w) for (i, j), w in sorted(merged.items()))
        )

    def symmetric_pairs(self) -> dict[tuple[int, int], Fraction]:
        """Combined coupling per unordered pair {i, j} with i < j.

        Both energies depend only on beta_ij + beta_ji, so consumers that
        build undirected structures use this view.
        """
        pairs: dict[tuple[int, int], Fraction] = {}
        for i, j, beta in self.arcs:
            key = (i, j) if i < j else (j, i)
            pairs[key] = pairs.get(key, Fraction(0)) + beta
        return pairs

    def incident_totals(self, n: int) -> list[Fraction]:
        """Total coupling touching each pixel, counting both directions."""
        totals = [Fraction(0)] * n
        for i, j, beta in self.arcs:
            totals[i] += beta
            totals[j] += beta
        return totals


def validate_instance(field: FeatureField, labels: LabelSet, edges: EdgeSet) -> None:
    """Check the joint invariants that tie an instance together.

    Per-type invariants hold by construction; this verifies the shared ones:
    features lie in [0, max_feature] and arcs address existing pixels.
    Raises ValidationError on the first violation.
    """
    if max(field.features) > labels.max_feature:
        raise ValidationError(
            f"feature value {max(field.features)} exceeds range "
            f"[0, {labels.max_feature}]"
        )
    for i, j, _ in edges.arcs:
        if i >= field.n or j >= field.n:
            raise ValidationError(
                f"arc ({i}, {j}) addresses a pixel outside 0..{field.n - 1}"
            )


def _check_labeling(
    field: FeatureField, labeling: Sequence[int], labels: LabelSet | None
) -> tuple[int, ...]:
    m = tuple(int(v) for v in labeling)
    if len(m) != field.n:
        raise ValidationError(f"labeling has {len(m)} entries for {field.n} pixels")
    if labels is not None:
        for v in m:
            if v not in labels:
                raise ValidationError(f"label {v} outside label set {labels.levels}")
    return m


def rescale_to_integers(
    field: FeatureField, edges: EdgeSet
) -> tuple[FeatureField, EdgeSet, int]:
    """Multiply all weights by their least common denominator.

    Returns (field', edges', scale) where every weight in field' and edges'
    is an integer-valued Fraction and scale is the multiplier.  Both model
    energies scale linearly in the weights, so argmin sets are unchanged and
    energies of the rescaled instance equal scale times the originals.
    """
    denoms = [w.denominator for w in field.weights]
    denoms.extend(beta.denominator for _, _, beta in edges.arcs)
    scale = math.lcm(*denoms) if denoms else 1
    if scale == 1:
        return field, edges, 1
    new_field = FeatureField(
        field.features, tuple(w * scale for w in field.weights)
    )
    new_edges = EdgeSet(tuple((i, j, beta * scale) for i, j, beta in edges.arcs))
    return new_field, new_edges, scale


def _integer_weights(field: FeatureField, edges: EdgeSet):
    """Rescaled plain-int weights plus the applied scale."""
    ifield, iedges, scale = rescale_to_integers(field, edges)
    lams = [int(w) for w in ifield.weights]
    arcs = [(i, j, int(beta)) for i, j, beta in iedges.arcs]
    return lams, arcs, scale


def energy_u1(
    field: FeatureField,
    edges: EdgeSet,
    labeling: Sequence[int],
    labels: LabelSet | None = None,
) -> Fraction:
    """Exact absolute-deviation energy of a labeling.

    Sum of weight_i * |f_i - m_i| over pixels plus coupling_ij * |m_i - m_j|
    over arcs.  When `labels` is given, every m_i must belong to it.
    """
    m = _check_labeling(field, labeling, labels)
    lams, arcs, scale = _integer_weights(field, edges)
    total = sum(w * abs(f - v) for f, w, v in zip(field.features, lams, m))
    total += sum(beta * abs(m[i] - m[j]) for i, j, beta in arcs)
    return Fraction(total, scale)


def energy_u2(
    field: FeatureField,
    edges: EdgeSet,
    labeling: Sequence[int],
    labels: LabelSet | None = None,
) -> Fraction:
    """Exact squared-deviation energy of a labeling."""
    m = _check_labeling(field, labeling, labels)
    lams, arcs, scale = _integer_weights(field, edges)
    total = sum(w * (f - v) ** 2 for f, w, v in zip(field.features, lams, m))
    total += sum(beta * (m[i] - m[j]) ** 2 for i, j, beta in arcs)
    return Fraction(total, scale)
