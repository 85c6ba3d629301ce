"""Cut-network constructions for the two classifiers.

Two families of networks are built here.  For the absolute-deviation model,
one network per level whose s-t cuts are in bijection with Boolean
assignments and whose cut capacities reproduce the level energies u(l, .)
after division by a scale factor.  For the squared-deviation model, a single
network over all (pixel, level) nodes whose cuts evaluate the submodular
surrogate polynomial of the energy's Boolean expansion; its minimum cut
decodes to level indicators that compose into the exact minimizer.

Both constructions put a node on the source side to mean "this Boolean
variable is 1".  Capacities are integers: rational weights are cleared by
their common denominator, which is folded into the reported scale.  Python
integers are unbounded, so capacities cannot overflow at any input size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import (
    EdgeSet,
    FeatureField,
    LabelSet,
    ValidationError,
    _integer_weights,
    validate_instance,
)
from .levelset import LevelVector, z_vectors
from .maxflow import FlowNetwork


def _pair_weights(int_arcs) -> dict[tuple[int, int], int]:
    """Integer coupling per unordered pair, both directions summed."""
    pairs: dict[tuple[int, int], int] = {}
    for i, j, beta in int_arcs:
        key = (i, j) if i < j else (j, i)
        pairs[key] = pairs.get(key, 0) + beta
    return pairs


@dataclass(frozen=True)
class LevelNetworkMap:
    """One level's network plus the bookkeeping to read energies off cuts.

    Pixel i is node i; source and sink are the last two nodes.  For every
    s-t cut, the decoded assignment b (1 = source side) satisfies

        u_level(level, b, ...) == Fraction(cut capacity, scale) + constant_offset

    where scale = gap * weight denominator and the offset is zero: the level
    energies are represented completely, nothing is left in a constant.
    """

    network: FlowNetwork
    pixel_to_node: tuple[int, ...]
    level: int
    gap: int
    scale: int
    constant_offset: Fraction

    def decode_cut(self, source_side: Iterable[int]) -> tuple[int, ...]:
        """Boolean assignment read off a cut's source side."""
        side = frozenset(source_side)
        return tuple(1 if node in side else 0 for node in self.pixel_to_node)

    def cut_to_energy(self, cut_value: int) -> Fraction:
        return Fraction(cut_value, self.scale) + self.constant_offset


def build_level_network(
    level: int, z: LevelVector, field: FeatureField, edges: EdgeSet
) -> LevelNetworkMap:
    """Network whose minimum cuts are the minimizers of u(level, .).

    Terminal capacities encode the unary costs: cutting s->i (pixel on the
    sink side, b_i = 0) costs weight_i * z_i, cutting i->t costs
    weight_i * (1 - z_i).  Each unordered pixel pair with combined coupling
    w carries opposed arcs so that separating the pair costs w.  Everything
    is multiplied by gap * denominator to make capacities integral.
    """
    if z.level != level:
        raise ValidationError(f"level vector is for level {z.level}, not {level}")
    if len(z.z) != field.n:
        raise ValidationError("level vector size differs from pixel count")
    lams, int_arcs, denom = _integer_weights(field, edges)
    gap = z.denom
    counts = z.scaled()
    n = field.n
    source, sink = n, n + 1
    arcs: list[tuple[int, int, int]] = []
    for i in range(n):
        zero_cost = lams[i] * counts[i]
        one_cost = lams[i] * (gap - counts[i])
        if zero_cost:
            arcs.append((source, i, zero_cost))
        if one_cost:
            arcs.append((i, sink, one_cost))
    for (i, j), w in _pair_weights(int_arcs).items():
        cap = gap * w
        if cap:
            arcs.append((i, j, cap))
            arcs.append((j, i, cap))
    return LevelNetworkMap(
        network=FlowNetwork(n + 2, source, sink, tuple(arcs)),
        pixel_to_node=tuple(range(n)),
        level=level,
        gap=gap,
        scale=gap * denom,
        constant_offset=Fraction(0),
    )


def build_level_networks(
    field: FeatureField, labels: LabelSet, edges: EdgeSet
) -> list[LevelNetworkMap]:
    """All k level networks for an instance, in level order."""
    validate_instance(field, labels, edges)
    return [
        build_level_network(z.level, z, field, edges)
        for z in z_vectors(field, labels)
    ]


@dataclass(frozen=True)
class GaussNetworkMap:
    """The level-expanded network for the squared-deviation model.

    Node (pixel i, level l) has id (l - 1) * pixel_count + i; source and
    sink are the last two ids.  For every s-t cut with decoded indicator
    tuples x(1..k),

        Fraction(cut capacity, scale) + constant_offset
            == sum_i weight_i * g_i**2 + Q(x)

    where g_i = f_i - m(0) and Q is the surrogate polynomial: the energy's
    Boolean expansion with every same-pixel product x_i(tau) * x_i(l)
    (tau < l) replaced by x_i(l).  The replacement never lowers the value
    and is tight exactly on level-monotone assignments, where the right
    hand side equals the squared-deviation energy of the composed labeling.
    The offset collects the pixel constants and the shifts incurred when a
    negative unary coefficient moves to the opposite terminal.
    """

    network: FlowNetwork
    pixel_count: int
    level_count: int
    scale: int
    constant_offset: Fraction

    def node_id(self, pixel: int, level: int) -> int:
        if not 0 <= pixel < self.pixel_count:
            raise ValidationError(f"pixel {pixel} out of range")
        if not 1 <= level <= self.level_count:
            raise ValidationError(f"level {level} out of range")
        return (level - 1) * self.pixel_count + pixel

    def decode_cut(self, source_side: Iterable[int]) -> tuple[tuple[int, ...], ...]:
        """Indicator tuples x(1..k) read off a cut's source side."""
        side = frozenset(source_side)
        return tuple(
            tuple(
                1 if (l - 1) * self.pixel_count + i in side else 0
                for i in range(self.pixel_count)
            )
            for l in range(1, self.level_count + 1)
        )

    def cut_to_energy(self, cut_value: int) -> Fraction:
        return Fraction(cut_value, self.scale) + self.constant_offset


def gauss_unary_coefficients(
    field: FeatureField, labels: LabelSet, edges: EdgeSet
) -> tuple[list[list[int]], int]:
    """Integer unary coefficients c[l-1][i] of the surrogate polynomial.

    In rescaled weights, with a_l the level gaps, g_i = f_i - m(0),
    B_i the total coupling incident to pixel i, and span = m(k) - m(0):

        c_{i,l} = w_i a_l^2 - 2 w_i g_i a_l - a_l (span - a_l) B_i
                  + 2 (w_i + B_i) a_l (m(l-1) - m(0))

    Returned together with the weight denominator that was cleared.
    """
    lams, int_arcs, denom = _integer_weights(field, edges)
    pairs = _pair_weights(int_arcs)
    n = field.n
    incident = [0] * n
    for (i, j), w in pairs.items():
        incident[i] += w
        incident[j] += w
    m0 = labels.levels[0]
    span = labels.levels[-1] - m0
    coeffs: list[list[int]] = []
    for l in range(1, labels.k + 1):
        a = labels.gaps[l - 1]
        below = labels.levels[l - 1] - m0
        row = []
        for i in range(n):
            g = field.features[i] - m0
            c = (
                lams[i] * a * a
                - 2 * lams[i] * g * a
                - a * (span - a) * incident[i]
                + 2 * (lams[i] + incident[i]) * a * below
            )
            row.append(c)
        coeffs.append(row)
    return coeffs, denom


def build_gauss_network(
    field: FeatureField, labels: LabelSet, edges: EdgeSet
) -> GaussNetworkMap:
    """Single network minimizing the squared-deviation model's surrogate.

    Unary coefficients attach to the sign-appropriate terminal: positive c
    becomes an arc node->sink of capacity c (paid when the variable is 1),
    negative c becomes source->node of capacity -c with c folded into the
    constant offset.  Every pair of nodes (i, l), (j, tau) on distinct
    pixels with combined coupling w gets opposed arcs of capacity
    w * a_l * a_tau, realizing the quadratic terms; same-pixel products do
    not appear in the surrogate, so pixels' own level nodes are never
    linked.  All quadratic coefficients are nonnegative, so every term is
    submodular and the cut evaluates the polynomial exactly.
    """
    validate_instance(field, labels, edges)
    if labels.k < 1:
        raise ValidationError("squared-model network needs at least one level")
    n, k = field.n, labels.k
    coeffs, denom = gauss_unary_coefficients(field, labels, edges)
    lams, int_arcs, _ = _integer_weights(field, edges)
    pairs = _pair_weights(int_arcs)
    source, sink = n * k, n * k + 1
    arcs: list[tuple[int, int, int]] = []
    negative_total = 0
    for l in range(1, k + 1):
        for i in range(n):
            node = (l - 1) * n + i
            c = coeffs[l - 1][i]
            if c > 0:
                arcs.append((node, sink, c))
            elif c < 0:
                arcs.append((source, node, -c))
                negative_total += c
    gaps = labels.gaps
    for (i, j), w in pairs.items():
        if not w:
            continue
        for l, tau in itertools.product(range(1, k + 1), repeat=2):
            cap = w * gaps[l - 1] * gaps[tau - 1]
            u = (l - 1) * n + i
            v = (tau - 1) * n + j
            arcs.append((u, v, cap))
            arcs.append((v, u, cap))
    m0 = labels.levels[0]
    pixel_constant = sum(
        lam * (f - m0) ** 2 for lam, f in zip(lams, field.features)
    )
    return GaussNetworkMap(
        network=FlowNetwork(n * k + 2, source, sink, tuple(arcs)),
        pixel_count=n,
        level_count=k,
        scale=denom,
        constant_offset=Fraction(pixel_constant + negative_total, denom),
    )
