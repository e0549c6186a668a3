"""Plane cones, the local Fermi factor, and tensor exchange phases."""

import numpy as np
import pytest
import scipy.sparse as sp

from anyoncircle.cones import (
    EuclideanMotion,
    GeneralizedCone,
    cones_disjoint,
    cones_overlap_sampled,
    direction_vector,
    fermi_exchange_elements,
    fermi_field,
    point_in_cone_sampled,
    polygons_disjoint,
    rep_e2,
    rotation_matrix,
    tensor_exchange_from_parts,
    tensor_field,
    transformed_label,
)
from anyoncircle.cones import TestFunctionSpace as FunctionSpace
from anyoncircle.covering import TWO_PI, CoveringInterval, relative_winding
from anyoncircle.errors import DegenerateGeometry, UnknownTransformedFunction

ORIGIN = np.array([[0.0, 0.0]])


def _cone(apex_x, apex_y, center, half_width=0.3):
    return GeneralizedCone(np.array([[apex_x, apex_y]]), CoveringInterval(center, half_width))


def _random_cone(rng):
    k = int(rng.integers(1, 4))
    poly = rng.normal(scale=2.5, size=(k, 2))
    return GeneralizedCone(
        poly, CoveringInterval(rng.uniform(0, TWO_PI), rng.uniform(0.06, 1.0))
    )


def test_direction_vector_convention():
    assert np.allclose(direction_vector(0.0), [0.0, 1.0])
    assert np.allclose(direction_vector(np.pi / 2), [1.0, 0.0])
    # labels are clockwise from north: R(-mu) e_y
    mu = 1.234
    assert np.allclose(rotation_matrix(-mu) @ np.array([0.0, 1.0]), direction_vector(mu))


def test_cone_validation():
    with pytest.raises(DegenerateGeometry):
        GeneralizedCone(ORIGIN, CoveringInterval(0.0, np.pi / 2))
    with pytest.raises(DegenerateGeometry):
        GeneralizedCone(np.zeros((0, 2)), CoveringInterval(0.0, 0.3))
    with pytest.raises(DegenerateGeometry):
        GeneralizedCone(np.array([[np.inf, 0.0]]), CoveringInterval(0.0, 0.3))


def test_point_membership():
    cone = _cone(0.0, 0.0, 0.3, 0.2)
    assert point_in_cone_sampled(np.zeros(2), cone)
    assert point_in_cone_sampled(5.0 * direction_vector(0.3), cone)
    assert point_in_cone_sampled(2.0 * direction_vector(0.45), cone)
    assert not point_in_cone_sampled(2.0 * direction_vector(0.3 + np.pi), cone)
    assert not point_in_cone_sampled(2.0 * direction_vector(1.2), cone)


def test_disjointness_known_cases():
    back_to_back = (_cone(1.0, 0.0, np.pi / 2), _cone(-1.0, 0.0, 3 * np.pi / 2))
    assert cones_disjoint(*back_to_back)
    facing = (_cone(1.0, 0.0, 3 * np.pi / 2), _cone(-1.0, 0.0, np.pi / 2))
    assert not cones_disjoint(*facing)
    shared_apex = (_cone(0.0, 0.0, 0.0), _cone(0.0, 0.0, 1.0))
    assert not cones_disjoint(*shared_apex)
    assert polygons_disjoint(ORIGIN, ORIGIN + 1.0)
    assert not polygons_disjoint(
        np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]),
        np.array([[0.5, 0.5], [3.0, 3.0]]),
    )


def test_lp_against_sampled_oracle():
    rng = np.random.default_rng(77)
    for _ in range(30):
        c1, c2 = _random_cone(rng), _random_cone(rng)
        if cones_overlap_sampled(c1, c2):
            assert not cones_disjoint(c1, c2)


def test_motion_equivariance_of_disjointness():
    rng = np.random.default_rng(78)
    for _ in range(30):
        c1, c2 = _random_cone(rng), _random_cone(rng)
        g = rep_e2(rng.normal(scale=5.0, size=2), rng.uniform(-6, 6))
        assert cones_disjoint(c1, c2) == cones_disjoint(g.apply_cone(c1), g.apply_cone(c2))


def test_motion_moves_points_with_cones():
    cone = _cone(0.4, -0.2, 0.7, 0.25)
    g = rep_e2((1.5, -0.7), 0.9)
    for radius in (0.0, 2.0, 7.0):
        x = np.array([0.4, -0.2]) + radius * direction_vector(0.7)
        assert point_in_cone_sampled(g.apply_point(x), g.apply_cone(cone))


def test_motion_composition_and_group_identities():
    g1 = rep_e2((0.3, 1.1), 0.8)
    g2 = rep_e2((-2.0, 0.4), -1.7)
    x = np.array([0.9, -0.5])
    composed = g1.compose(g2)
    assert np.max(np.abs(composed.apply_point(x) - g1.apply_point(g2.apply_point(x)))) < 1e-12
    assert composed.rotation == pytest.approx(0.8 - 1.7)
    ident = rep_e2((0.0, 0.0), 0.0)
    assert np.max(np.abs(ident.apply_point(x) - x)) == 0.0


def test_full_turn_lifts_direction_winding():
    cone = _cone(0.0, 0.0, 1.0, 0.2)
    turned = rep_e2((0.0, 0.0), TWO_PI).apply_cone(cone)
    assert np.max(np.abs(turned.polygon - cone.polygon)) < 1e-12
    assert turned.directions.center.base == pytest.approx(cone.directions.center.base)
    other = CoveringInterval(4.0, 0.2)
    assert (
        relative_winding(turned.directions, other)
        == relative_winding(cone.directions, other) + 1
    )


def _two_function_space():
    # orthogonal pair with disjoint triangular supports
    polys = [
        np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        np.array([[4.0, 0.0], [5.0, 0.0], [4.0, 1.0]]),
    ]
    return FunctionSpace(["f1", "f2"], np.eye(2), polys)


def test_space_validation():
    polys = [ORIGIN, ORIGIN + 3.0]
    with pytest.raises(ValueError):
        FunctionSpace(["f1", "f2"], np.array([[1.0, 1j], [1j, 1.0]]), polys)
    with pytest.raises(ValueError):
        FunctionSpace(["f1", "f2"], np.array([[1.0, 2.0], [2.0, 1.0]]), polys)
    with pytest.raises(ValueError):
        # disjoint supports with a nonzero overlap entry
        FunctionSpace(["f1", "f2"], np.array([[1.0, 0.5], [0.5, 1.0]]), polys)


def test_fermi_car_reproduces_gram():
    gram = np.array([[1.0, 0.3], [0.3, 2.0]])
    polys = [
        np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        np.array([[0.2, 0.2], [1.2, 0.2], [0.2, 1.2]]),
    ]  # overlapping supports, so the Gram entry may be nonzero
    space = FunctionSpace(["f1", "f2"], gram, polys)
    eye = np.eye(space.fock_dim)
    for i in range(2):
        for j in range(2):
            ann, cre = space.annihilator(i), space.creator(j)
            anti = (ann @ cre + cre @ ann).toarray()
            assert np.max(np.abs(anti - gram[i, j] * eye)) < 1e-12
            both = space.annihilator(i) @ space.annihilator(j)
            assert np.max(np.abs((both + space.annihilator(j) @ space.annihilator(i)).toarray())) < 1e-12
    psi = [fermi_field(i, space).toarray() for i in range(2)]
    for i in range(2):
        for j in range(2):
            anti = psi[i] @ psi[j] + psi[j] @ psi[i]
            assert np.max(np.abs(anti - 2.0 * gram[i, j] * eye)) < 1e-12


def test_disjoint_fermi_fields_anticommute_exactly():
    space = _two_function_space()
    fw, rv = fermi_exchange_elements(space, 0, 1)
    assert np.max(np.abs(fw + rv)) < 1e-12
    afw, arv = fermi_exchange_elements(space, 0, 1, adjoint=True)
    assert np.max(np.abs(afw + arv)) < 1e-12


def test_tensor_exchange_factorizes():
    space = _two_function_space()
    rng = np.random.default_rng(5)
    c1 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    c2 = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    fermi_fw, fermi_rv = fermi_exchange_elements(space, 0, 1)
    phase, dev = tensor_exchange_from_parts(fermi_fw, fermi_rv, c1 @ c2, c2 @ c1)
    t1 = sp.kron(fermi_field(0, space), sp.csr_matrix(c1)).toarray()
    t2 = sp.kron(fermi_field(1, space), sp.csr_matrix(c2)).toarray()
    from anyoncircle.fock import phase_from_elements

    direct, direct_dev = phase_from_elements((t1 @ t2).ravel(), (t2 @ t1).ravel())
    assert abs(phase - direct) < 1e-12
    assert dev == pytest.approx(direct_dev, abs=1e-12)


def test_tensor_field_carries_cone():
    space = _two_function_space()
    interval = CoveringInterval(0.9, 0.4)
    field = tensor_field(0, space, sp.identity(3, format="csr"), interval)
    assert field.label == "f1"
    assert field.matrix.shape == (12, 12)
    assert field.localization.directions is interval
    assert np.max(np.abs(field.localization.polygon - space.polygons[0])) == 0.0


def test_transformed_label_lookup():
    space = _two_function_space()
    g = rep_e2((4.0, 0.0), 0.0)
    assert transformed_label(space, 0, g) == 1
    with pytest.raises(UnknownTransformedFunction):
        transformed_label(space, 0, rep_e2((0.5, 0.5), 0.0))
