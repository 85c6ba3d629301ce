"""Brute-force ground truth for differential testing.

Everything here minimizes by enumeration, never by reduction, so a result
can disagree with the classifiers only if one of them is wrong.  Energies
are exact rationals; argmin sets are complete.  Two enumeration engines
back the labeling oracles: a vectorized one over int64 (used when a safe
bound on the largest possible energy fits the width) and a plain-int one
that can never overflow; they are kept independently testable through the
`engine` argument.

State-space caps are explicit arguments with hard failure.  An oracle that
silently truncates is worse than none.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import (
    EdgeSet,
    FeatureField,
    GibbsCutError,
    InternalInvariantError,
    LabelSet,
    _integer_weights,
    validate_instance,
)
from .imageio import grid_neighbor_pairs
from .levelset import LevelVector

DEFAULT_STATE_CAP = 1 << 20

_INT64_SAFE = 1 << 62


class EnumerationCapError(GibbsCutError):
    """The requested enumeration exceeds the configured state cap."""


@lru_cache(maxsize=16)
def _digit_table(base: int, length: int) -> np.ndarray:
    """digits[s, p] = p-th base-`base` digit of s, for all s < base**length."""
    states = base**length
    idx = np.arange(states, dtype=np.int64)
    cols = [(idx // base**p) % base for p in range(length)]
    table = np.stack(cols, axis=1).astype(np.int16)
    table.setflags(write=False)
    return table


def _energy_bound(lams, int_arcs, features, levels, power: int) -> int:
    span = levels[-1] - levels[0]
    dev = sum(
        lam * max(abs(f - levels[0]), abs(f - levels[-1])) ** power
        for lam, f in zip(lams, features)
    )
    return dev + sum(beta * span**power for _, _, beta in int_arcs)


def _energies_vectorized(lams, int_arcs, features, levels, power: int) -> np.ndarray:
    k1 = len(levels)
    n = len(features)
    digits = _digit_table(k1, n)
    lev = np.asarray(levels, dtype=np.int64)
    total = np.zeros(len(digits), dtype=np.int64)
    for i in range(n):
        if not lams[i]:
            continue
        dev = np.abs(features[i] - lev) ** power
        total += (lams[i] * dev)[digits[:, i]]
    for i, j, beta in int_arcs:
        if not beta:
            continue
        table = beta * np.abs(lev[:, None] - lev[None, :]) ** power
        total += table[digits[:, i], digits[:, j]]
    return total


def _minimize_plain(lams, int_arcs, features, levels, power: int):
    n = len(features)
    best = None
    argmin: list[tuple[int, ...]] = []
    for m in itertools.product(levels, repeat=n):
        total = sum(
            lam * abs(f - v) ** power for lam, f, v in zip(lams, features, m)
        )
        total += sum(beta * abs(m[i] - m[j]) ** power for i, j, beta in int_arcs)
        if best is None or total < best:
            best = total
            argmin = [m]
        elif total == best:
            argmin.append(m)
    return best, argmin


def _brute_labelings(field, labels, edges, power, state_cap, engine):
    validate_instance(field, labels, edges)
    n = field.n
    k1 = labels.k + 1
    states = k1**n
    if states > state_cap:
        raise EnumerationCapError(
            f"{states} labelings exceed the cap {state_cap}"
        )
    lams, int_arcs, denom = _integer_weights(field, edges)
    levels = labels.levels
    if engine not in ("auto", "numpy", "python"):
        raise GibbsCutError(f"unknown engine {engine!r}")
    if engine != "python":
        bound = _energy_bound(lams, int_arcs, field.features, levels, power)
        if bound < _INT64_SAFE:
            totals = _energies_vectorized(
                lams, int_arcs, field.features, levels, power
            )
            best = int(totals.min())
            argmin = [
                tuple(levels[(int(s) // k1**p) % k1] for p in range(n))
                for s in np.flatnonzero(totals == best)
            ]
            return Fraction(best, denom), tuple(sorted(argmin))
        if engine == "numpy":
            raise GibbsCutError(
                "weights too large for the fixed-width engine; use engine='python'"
            )
    best, argmin = _minimize_plain(lams, int_arcs, field.features, levels, power)
    return Fraction(best, denom), tuple(sorted(argmin))


def brute_min_u1(
    field: FeatureField,
    labels: LabelSet,
    edges: EdgeSet,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
    engine: str = "auto",
):
    """Exact minimum of the absolute-deviation energy and its full argmin set."""
    return _brute_labelings(field, labels, edges, 1, state_cap, engine)


def brute_min_u2(
    field: FeatureField,
    labels: LabelSet,
    edges: EdgeSet,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
    engine: str = "auto",
):
    """Exact minimum of the squared-deviation energy and its full argmin set."""
    return _brute_labelings(field, labels, edges, 2, state_cap, engine)


def lattice_extremes(minimizers: Sequence[Sequence[int]]):
    """Componentwise least and greatest elements of a set of tuples.

    Raises InternalInvariantError if either candidate is missing from the
    set; for the minimizer sets enumerated here that would falsify the
    structural guarantees the classifiers rely on.
    """
    pool = {tuple(int(v) for v in m) for m in minimizers}
    if not pool:
        raise InternalInvariantError("empty minimizer set")
    low = tuple(min(col) for col in zip(*pool))
    high = tuple(max(col) for col in zip(*pool))
    if low not in pool:
        raise InternalInvariantError(
            "minimizer set has no least element under the componentwise order"
        )
    if high not in pool:
        raise InternalInvariantError(
            "minimizer set has no greatest element under the componentwise order"
        )
    return low, high


@dataclass(frozen=True)
class LevelBruteResult:
    """Everything the enumeration learns about one level's Boolean problem."""

    energy: Fraction
    minimizers: tuple[tuple[int, ...], ...]
    minimal: tuple[int, ...]
    maximal: tuple[int, ...]


def brute_min_level(
    level: int,
    z: LevelVector,
    field: FeatureField,
    edges: EdgeSet,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
) -> LevelBruteResult:
    """Enumerate one level's Boolean energy completely.

    Returns the exact minimum, every minimizer, and the least and greatest
    minimizers, which must exist for these energies.
    """
    if z.level != level:
        raise GibbsCutError(f"level vector is for level {z.level}, not {level}")
    n = field.n
    if 2**n > state_cap:
        raise EnumerationCapError(f"{2**n} assignments exceed the cap {state_cap}")
    lams, int_arcs, denom = _integer_weights(field, edges)
    gap = z.denom
    counts = z.scaled()
    best = None
    argmin: list[tuple[int, ...]] = []
    for bits in itertools.product((0, 1), repeat=n):
        total = sum(
            lam * (gap - c if b else c)
            for lam, c, b in zip(lams, counts, bits)
        )
        total += gap * sum(
            beta for i, j, beta in int_arcs if bits[i] != bits[j]
        )
        if best is None or total < best:
            best = total
            argmin = [bits]
        elif total == best:
            argmin.append(bits)
    low, high = lattice_extremes(argmin)
    return LevelBruteResult(
        energy=Fraction(best, gap * denom),
        minimizers=tuple(argmin),
        minimal=low,
        maximal=high,
    )


def _dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x >= y for x, y in zip(a, b))


def cross_order_check(
    upper: Sequence[Sequence[int]], lower: Sequence[Sequence[int]]
) -> bool:
    """Order relation between minimizer sets at a lower and a higher level.

    `upper` holds the minimizers at the smaller level index.  True iff every
    upper minimizer dominates some lower minimizer and every lower minimizer
    is dominated by some upper one.
    """
    ups = [tuple(u) for u in upper]
    lows = [tuple(w) for w in lower]
    if not ups or not lows:
        return False
    return all(any(_dominates(u, w) for w in lows) for u in ups) and all(
        any(_dominates(u, w) for u in ups) for w in lows
    )


def _level_shifts(
    labels: LabelSet, x: Sequence[Sequence[int]], n: int
) -> list[int]:
    gaps = labels.gaps
    return [
        sum(gaps[l] * x[l][i] for l in range(len(x))) for i in range(n)
    ]


def _check_level_tuple(
    labels: LabelSet, x: Sequence[Sequence[int]], n: int
) -> tuple[tuple[int, ...], ...]:
    levels = tuple(tuple(int(v) for v in row) for row in x)
    if len(levels) != labels.k:
        raise GibbsCutError(f"expected {labels.k} level rows, got {len(levels)}")
    for row in levels:
        if len(row) != n:
            raise GibbsCutError("level row length differs from pixel count")
        if any(v not in (0, 1) for v in row):
            raise GibbsCutError("level rows must be 0/1 valued")
    return levels


def p_value(
    x: Sequence[Sequence[int]],
    field: FeatureField,
    labels: LabelSet,
    edges: EdgeSet,
) -> Fraction:
    """The energy's Boolean expansion, defined for arbitrary level rows.

    P(x) is the squared-deviation energy of the pointwise label shifts
    m(0) + sum_l a_l x_i(l), minus the constant sum_i weight_i g_i**2.  On
    level-monotone x this is the true energy minus that constant; elsewhere
    it extends the polynomial off the monotone set.
    """
    rows = _check_level_tuple(labels, x, field.n)
    m0 = labels.levels[0]
    shifts = _level_shifts(labels, rows, field.n)
    total = Fraction(0)
    for f, w, s in zip(field.features, field.weights, shifts):
        g = f - m0
        total += w * ((g - s) ** 2 - g**2)
    for i, j, beta in edges.arcs:
        total += beta * (shifts[i] - shifts[j]) ** 2
    return total


def q_value(
    x: Sequence[Sequence[int]],
    field: FeatureField,
    labels: LabelSet,
    edges: EdgeSet,
) -> Fraction:
    """The submodular surrogate: P plus the same-pixel monotonicity surcharge.

    Q(x) = P(x) + 2 sum_i (weight_i + B_i) sum_{tau<l} a_l a_tau
    x_i(l) (1 - x_i(tau)), where B_i is the coupling incident to pixel i.
    The surcharge vanishes exactly on level-monotone rows, so Q and P agree
    there, and Q is minimized by the level-expanded cut network.
    """
    rows = _check_level_tuple(labels, x, field.n)
    total = p_value(rows, field, labels, edges)
    incident = edges.incident_totals(field.n)
    gaps = labels.gaps
    k = labels.k
    for i in range(field.n):
        coeff = field.weights[i] + incident[i]
        if not coeff:
            continue
        for l in range(1, k):
            if not rows[l][i]:
                continue
            for tau in range(l):
                if not rows[tau][i]:
                    total += 2 * coeff * gaps[l] * gaps[tau]
    return total


def brute_min_q(
    field: FeatureField,
    labels: LabelSet,
    edges: EdgeSet,
    *,
    state_cap: int = DEFAULT_STATE_CAP,
):
    """Exact minimum of the surrogate polynomial over ALL level rows.

    Enumerates monotone and non-monotone assignments alike; the minimum
    must coincide with the squared-model minimum shifted by the pixel
    constant, and with all minimizers level-monotone.
    """
    validate_instance(field, labels, edges)
    n, k = field.n, labels.k
    if 2 ** (n * k) > state_cap:
        raise EnumerationCapError(
            f"{2 ** (n * k)} assignments exceed the cap {state_cap}"
        )
    best = None
    argmin: list[tuple[tuple[int, ...], ...]] = []
    for bits in itertools.product((0, 1), repeat=n * k):
        rows = tuple(bits[l * n : (l + 1) * n] for l in range(k))
        value = q_value(rows, field, labels, edges)
        if best is None or value < best:
            best = value
            argmin = [rows]
        elif value == best:
            argmin.append(rows)
    return best, tuple(argmin)


def random_grid_instance(
    rng: random.Random,
    *,
    rows: int = 3,
    cols: int = 3,
    k_choices: Sequence[int] = (1, 2, 3),
    max_feature: int = 5,
    lambda_max: int = 3,
    beta_max: int = 2,
    connectivity: int = 4,
):
    """A random grid instance drawn from the differential-test distribution.

    Integer weights: per-pixel data weights in [0, lambda_max], independent
    per-direction couplings in [0, beta_max] on grid neighbor arcs, labels a
    random (k+1)-subset of [0, L] with L in [k, max_feature].
    """
    k = rng.choice(list(k_choices))
    if max_feature < k:
        raise GibbsCutError(f"max_feature {max_feature} cannot host {k + 1} labels")
    feature_max = rng.randint(k, max_feature)
    levels = tuple(sorted(rng.sample(range(feature_max + 1), k + 1)))
    n = rows * cols
    field = FeatureField(
        features=tuple(rng.randint(0, feature_max) for _ in range(n)),
        weights=tuple(
            Fraction(rng.randint(0, lambda_max)) for _ in range(n)
        ),
    )
    arcs = []
    for i, j in grid_neighbor_pairs((cols, rows), connectivity):
        arcs.append((i, j, Fraction(rng.randint(0, beta_max))))
        arcs.append((j, i, Fraction(rng.randint(0, beta_max))))
    return field, LabelSet(levels=levels, max_feature=feature_max), EdgeSet(tuple(arcs))
