"""Instance containers, joint validation, and the two exact energies."""

from fractions import Fraction

import pytest
from hypothesis import given

from gibbscut import (
    EdgeSet,
    FeatureField,
    LabelSet,
    ValidationError,
    energy_u1,
    energy_u2,
    rescale_to_integers,
    validate_instance,
)
from gibbscut.oracle import brute_min_u1, brute_min_u2
from strategies import all_labelings, instances


def two_pixel(lam0: int = 2, lam1: int = 1):
    """f = (0, 3), labels {0, 3}, unit coupling both ways."""
    field = FeatureField((0, 3), (Fraction(lam0), Fraction(lam1)))
    labels = LabelSet((0, 3), 3)
    edges = EdgeSet(((0, 1, Fraction(1)), (1, 0, Fraction(1))))
    return field, labels, edges


class TestLabelSet:
    def test_levels_and_gaps(self):
        labels = LabelSet((0, 2, 5), 6)
        assert labels.k == 2
        assert labels.gaps == (2, 3)
        assert 2 in labels
        assert 3 not in labels

    def test_single_label_has_no_gaps(self):
        labels = LabelSet((4,), 5)
        assert labels.k == 0
        assert labels.gaps == ()

    def test_rejects_unsorted(self):
        with pytest.raises(ValidationError):
            LabelSet((3, 0), 3)

    def test_rejects_duplicates(self):
        with pytest.raises(ValidationError):
            LabelSet((1, 1), 3)

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            LabelSet((), 3)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValidationError):
            LabelSet((0, 4), 3)
        with pytest.raises(ValidationError):
            LabelSet((-1, 2), 3)


class TestFeatureField:
    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            FeatureField((1, 2), (Fraction(1),))

    def test_negative_weight(self):
        with pytest.raises(ValidationError):
            FeatureField((1,), (Fraction(-1),))

    def test_negative_feature(self):
        with pytest.raises(ValidationError):
            FeatureField((-1,), (Fraction(1),))

    def test_non_rational_weight(self):
        with pytest.raises(ValidationError):
            FeatureField((1,), (0.5,))

    def test_empty(self):
        with pytest.raises(ValidationError):
            FeatureField((), ())

    def test_accepts_int_weights(self):
        field = FeatureField((0, 1), (1, Fraction(1, 2)))
        assert field.weights == (Fraction(1), Fraction(1, 2))
        assert field.n == 2


class TestEdgeSet:
    def test_merges_duplicate_arcs(self):
        edges = EdgeSet(((0, 1, Fraction(1)), (0, 1, Fraction(2))))
        assert edges.arcs == ((0, 1, Fraction(3)),)

    def test_sorted_storage_gives_equality(self):
        a = EdgeSet(((1, 0, Fraction(1)), (0, 1, Fraction(2))))
        b = EdgeSet(((0, 1, Fraction(2)), (1, 0, Fraction(1))))
        assert a == b

    def test_rejects_self_loop(self):
        with pytest.raises(ValidationError):
            EdgeSet(((2, 2, Fraction(1)),))

    def test_rejects_negative_coupling(self):
        with pytest.raises(ValidationError):
            EdgeSet(((0, 1, Fraction(-1)),))

    def test_rejects_negative_index(self):
        with pytest.raises(ValidationError):
            EdgeSet(((-1, 0, Fraction(1)),))

    def test_symmetric_pairs_combines_directions(self):
        edges = EdgeSet(((0, 1, Fraction(1)), (1, 0, Fraction(2)), (2, 0, Fraction(5))))
        assert edges.symmetric_pairs() == {
            (0, 1): Fraction(3),
            (0, 2): Fraction(5),
        }

    def test_incident_totals(self):
        edges = EdgeSet(((0, 1, Fraction(1)), (1, 0, Fraction(2))))
        assert edges.incident_totals(3) == [Fraction(3), Fraction(3), Fraction(0)]


class TestValidateInstance:
    def test_accepts_consistent_instance(self):
        validate_instance(*two_pixel())

    def test_rejects_feature_above_range(self):
        field = FeatureField((4,), (Fraction(1),))
        with pytest.raises(ValidationError):
            validate_instance(field, LabelSet((0, 3), 3), EdgeSet(()))

    def test_rejects_arc_outside_pixels(self):
        field = FeatureField((0, 1), (Fraction(1), Fraction(1)))
        edges = EdgeSet(((0, 2, Fraction(1)),))
        with pytest.raises(ValidationError):
            validate_instance(field, LabelSet((0, 1), 1), edges)


class TestEnergies:
    def test_absolute_energy_values(self):
        field, labels, edges = two_pixel()
        assert energy_u1(field, edges, (0, 0), labels) == 3
        assert energy_u1(field, edges, (3, 0), labels) == 15

    def test_squared_energy_values(self):
        field, labels, edges = two_pixel()
        assert energy_u2(field, edges, (0, 0), labels) == 9
        assert energy_u2(field, edges, (0, 3), labels) == 18

    def test_perfect_fit_costs_nothing(self):
        field = FeatureField((2, 2), (Fraction(1), Fraction(1)))
        edges = EdgeSet(((0, 1, Fraction(5)),))
        assert energy_u1(field, edges, (2, 2)) == 0
        assert energy_u2(field, edges, (2, 2)) == 0

    def test_label_outside_set_rejected(self):
        field, labels, edges = two_pixel()
        with pytest.raises(ValidationError):
            energy_u1(field, edges, (1, 0), labels)

    def test_labeling_length_checked(self):
        field, labels, edges = two_pixel()
        with pytest.raises(ValidationError):
            energy_u2(field, edges, (0,), labels)

    def test_rational_weights_stay_exact(self):
        field = FeatureField((0, 3), (Fraction(1, 3), Fraction(1, 7)))
        edges = EdgeSet(((0, 1, Fraction(2, 5)),))
        assert energy_u1(field, edges, (3, 0)) == Fraction(1) + Fraction(3, 7) + Fraction(6, 5)
        assert energy_u2(field, edges, (3, 0)) == 3 + Fraction(9, 7) + Fraction(18, 5)


class TestRescale:
    def test_clears_denominators(self):
        field = FeatureField((0, 1), (Fraction(1, 2), Fraction(3, 2)))
        edges = EdgeSet(((0, 1, Fraction(1, 3)),))
        new_field, new_edges, scale = rescale_to_integers(field, edges)
        assert scale == 6
        assert new_field.weights == (Fraction(3), Fraction(9))
        assert new_edges.arcs == ((0, 1, Fraction(2)),)

    def test_integer_weights_pass_through(self):
        field = FeatureField((0, 1), (Fraction(1), Fraction(2)))
        edges = EdgeSet(((0, 1, Fraction(3)),))
        new_field, new_edges, scale = rescale_to_integers(field, edges)
        assert scale == 1
        assert new_field is field
        assert new_edges is edges

    def test_rescaling_preserves_argmin_sets(self):
        field = FeatureField((0, 2, 3), (Fraction(1, 2), Fraction(1), Fraction(3, 4)))
        labels = LabelSet((0, 1, 3), 3)
        edges = EdgeSet(((0, 1, Fraction(2, 3)), (1, 2, Fraction(1, 2))))
        new_field, new_edges, scale = rescale_to_integers(field, edges)
        for brute in (brute_min_u1, brute_min_u2):
            value, argmin = brute(field, labels, edges)
            scaled_value, scaled_argmin = brute(new_field, labels, new_edges)
            assert scaled_value == scale * value
            assert scaled_argmin == argmin


@given(instances(rational=True))
def test_energies_scale_linearly_in_weights(instance):
    field, labels, edges = instance
    new_field, new_edges, scale = rescale_to_integers(field, edges)
    for m in all_labelings(labels, field.n):
        assert energy_u1(new_field, new_edges, m) == scale * energy_u1(field, edges, m)
        assert energy_u2(new_field, new_edges, m) == scale * energy_u2(field, edges, m)


@given(instances())
def test_energies_nonnegative_and_agree_on_unit_moves(instance):
    field, labels, edges = instance
    for m in all_labelings(labels, field.n):
        u1 = energy_u1(field, edges, m, labels)
        u2 = energy_u2(field, edges, m, labels)
        assert u1 >= 0 and u2 >= 0
        # all per-pixel and per-arc differences are 0 or 1: |d| == d**2
        if all(abs(f - v) <= 1 for f, v in zip(field.features, m)) and all(
            abs(m[i] - m[j]) <= 1 for i, j, _ in edges.arcs
        ):
            assert u1 == u2
