"""The two exact classifiers.

The absolute-deviation energy splits into independent Boolean problems, one
per level, whose minimal minimum cuts are automatically non-increasing
across levels; composing them pixelwise yields a global minimizer.  The
squared-deviation energy is minimized by a single cut on the level-expanded
network; its minimal cut decodes to non-increasing indicators as well.

Canonical tie-break everywhere: the minimal minimum cut, i.e. the minimizer
with the fewest variables set, which composes to the lowest minimizing
labeling.  Both classifiers recompute the energy of the returned labeling
from scratch and verify it against the cut accounting; a mismatch raises
InternalInvariantError since it can only mean a bug, never bad input.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    EdgeSet,
    FeatureField,
    InternalInvariantError,
    LabelSet,
    ValidationError,
    energy_u1,
    energy_u2,
    validate_instance,
)
from .levelset import boundary_constant, compose_label, z_vectors
from .maxflow import max_flow
from .netbuild import build_gauss_network, build_level_network


@dataclass(frozen=True)
class CutStats:
    """Per-network diagnostics.  `level` is 0 for the single-cut models."""

    level: int
    cut_value: int
    scale: int
    node_count: int
    arc_count: int
    build_seconds: float
    solve_seconds: float


@dataclass(frozen=True)
class ClassifierResult:
    """A classifier's output plus everything needed to audit it.

    `energy` is the full model energy of `labeling`, recomputed
    independently of the cuts; it always equals cut_energy +
    constant_offset.  `per_level_solutions` are the decoded indicator
    tuples, non-increasing across levels, and compose pixelwise back into
    `labeling`.
    """

    model: str
    labeling: tuple[int, ...]
    energy: Fraction
    per_level_solutions: tuple[tuple[int, ...], ...]
    cut_energy: Fraction
    constant_offset: Fraction
    stats: tuple[CutStats, ...]


def order_solutions(
    solutions: Sequence[Sequence[int]],
) -> tuple[tuple[int, ...], ...]:
    """Coordinatewise descending sort of Boolean assignments across levels.

    Output level l sets pixel i iff at least l of the inputs set pixel i,
    so the result is non-increasing and each pixel keeps its count of ones.
    Already-ordered input passes through unchanged.
    """
    sols = [tuple(int(v) for v in s) for s in solutions]
    if not sols:
        return ()
    n = len(sols[0])
    for s in sols:
        if len(s) != n:
            raise ValidationError("assignments differ in length")
        if any(v not in (0, 1) for v in s):
            raise ValidationError("assignments must be 0/1 valued")
    counts = [sum(s[i] for s in sols) for i in range(n)]
    return tuple(
        tuple(1 if counts[i] >= l else 0 for i in range(n))
        for l in range(1, len(sols) + 1)
    )


def _checked_monotone(
    solutions: Sequence[tuple[int, ...]],
) -> tuple[tuple[int, ...], ...]:
    """Assert level solutions are non-increasing and ordering is a no-op."""
    sols = tuple(solutions)
    for upper, lower in zip(sols, sols[1:]):
        if any(a < b for a, b in zip(upper, lower)):
            raise InternalInvariantError(
                "level solutions are not non-increasing across levels"
            )
    if order_solutions(sols) != sols:
        raise InternalInvariantError("ordering pass altered monotone solutions")
    return sols


def _compose_labeling(
    labels: LabelSet, solutions: Sequence[tuple[int, ...]], n: int
) -> tuple[int, ...]:
    return tuple(
        compose_label(labels, tuple(sol[i] for sol in solutions))
        for i in range(n)
    )


def _audit(energy: Fraction, cut_energy: Fraction, offset: Fraction) -> None:
    if energy != cut_energy + offset:
        raise InternalInvariantError(
            f"recomputed energy {energy} != cut accounting {cut_energy + offset}"
        )


def _constant_result(
    model: str,
    field: FeatureField,
    labels: LabelSet,
    edges: EdgeSet,
    energy_fn,
) -> ClassifierResult:
    # k = 0: the only labeling is constant m(0); no cuts to solve.
    labeling = (labels.levels[0],) * field.n
    energy = energy_fn(field, edges, labeling, labels)
    return ClassifierResult(
        model=model,
        labeling=labeling,
        energy=energy,
        per_level_solutions=(),
        cut_energy=Fraction(0),
        constant_offset=energy,
        stats=(),
    )


def classify_exp(
    field: FeatureField, labels: LabelSet, edges: EdgeSet
) -> ClassifierResult:
    """Exact minimizer of the absolute-deviation energy.

    Solves one minimum cut per level, takes the minimal cut each time,
    checks the solutions are non-increasing across levels, and composes
    them into the labeling.  The reported energy is the exact global
    minimum over all labelings; the returned labeling is the lowest
    minimizer.
    """
    validate_instance(field, labels, edges)
    if labels.k == 0:
        return _constant_result("exp", field, labels, edges, energy_u1)
    solutions: list[tuple[int, ...]] = []
    stats: list[CutStats] = []
    cut_energy = Fraction(0)
    for z in z_vectors(field, labels):
        t0 = time.perf_counter()
        net_map = build_level_network(z.level, z, field, edges)
        t1 = time.perf_counter()
        result = max_flow(net_map.network)
        t2 = time.perf_counter()
        solutions.append(net_map.decode_cut(result.source_side))
        cut_energy += net_map.gap * net_map.cut_to_energy(result.flow_value)
        stats.append(
            CutStats(
                level=z.level,
                cut_value=result.flow_value,
                scale=net_map.scale,
                node_count=net_map.network.node_count,
                arc_count=len(net_map.network.arcs),
                build_seconds=t1 - t0,
                solve_seconds=t2 - t1,
            )
        )
    ordered = _checked_monotone(solutions)
    labeling = _compose_labeling(labels, ordered, field.n)
    energy = energy_u1(field, edges, labeling, labels)
    offset = boundary_constant(field, labels)
    _audit(energy, cut_energy, offset)
    return ClassifierResult(
        model="exp",
        labeling=labeling,
        energy=energy,
        per_level_solutions=ordered,
        cut_energy=cut_energy,
        constant_offset=offset,
        stats=tuple(stats),
    )


def classify_gauss(
    field: FeatureField, labels: LabelSet, edges: EdgeSet
) -> ClassifierResult:
    """Exact minimizer of the squared-deviation energy via a single cut.

    Builds the level-expanded network, takes its minimal minimum cut,
    verifies the decoded indicators are non-increasing across levels, and
    composes the labeling.  The reported energy is the exact global
    minimum; the returned labeling is the lowest minimizer.
    """
    validate_instance(field, labels, edges)
    if labels.k == 0:
        return _constant_result("gauss", field, labels, edges, energy_u2)
    t0 = time.perf_counter()
    net_map = build_gauss_network(field, labels, edges)
    t1 = time.perf_counter()
    result = max_flow(net_map.network)
    t2 = time.perf_counter()
    ordered = _checked_monotone(net_map.decode_cut(result.source_side))
    labeling = _compose_labeling(labels, ordered, field.n)
    energy = energy_u2(field, edges, labeling, labels)
    cut_energy = Fraction(result.flow_value, net_map.scale)
    _audit(energy, cut_energy, net_map.constant_offset)
    return ClassifierResult(
        model="gauss",
        labeling=labeling,
        energy=energy,
        per_level_solutions=ordered,
        cut_energy=cut_energy,
        constant_offset=net_map.constant_offset,
        stats=(
            CutStats(
                level=0,
                cut_value=result.flow_value,
                scale=net_map.scale,
                node_count=net_map.network.node_count,
                arc_count=len(net_map.network.arcs),
                build_seconds=t1 - t0,
                solve_seconds=t2 - t1,
            ),
        ),
    )


def classify_boolean(
    field: FeatureField, labels: LabelSet, edges: EdgeSet
) -> ClassifierResult:
    """Single-cut fast path for the two-label model on features in {0, 1}.

    Requires labels (0, 1) with feature range 1.  Absolute and squared
    deviations coincide on 0/1 differences, so this result equals both
    general classifiers' outputs; the equality of the two energies is
    asserted internally.
    """
    validate_instance(field, labels, edges)
    if labels.levels != (0, 1) or labels.max_feature != 1:
        raise ValidationError(
            "Boolean fast path requires labels (0, 1) with feature range 1"
        )
    z = z_vectors(field, labels)[0]
    t0 = time.perf_counter()
    net_map = build_level_network(1, z, field, edges)
    t1 = time.perf_counter()
    result = max_flow(net_map.network)
    t2 = time.perf_counter()
    labeling = net_map.decode_cut(result.source_side)
    energy = energy_u1(field, edges, labeling, labels)
    if energy != energy_u2(field, edges, labeling, labels):
        raise InternalInvariantError(
            "absolute and squared energies differ on a Boolean instance"
        )
    cut_energy = net_map.cut_to_energy(result.flow_value)
    _audit(energy, cut_energy, Fraction(0))
    return ClassifierResult(
        model="boolean",
        labeling=labeling,
        energy=energy,
        per_level_solutions=(labeling,),
        cut_energy=cut_energy,
        constant_offset=Fraction(0),
        stats=(
            CutStats(
                level=0,
                cut_value=result.flow_value,
                scale=net_map.scale,
                node_count=net_map.network.node_count,
                arc_count=len(net_map.network.arcs),
                build_seconds=t1 - t0,
                solve_seconds=t2 - t1,
            ),
        ),
    )
