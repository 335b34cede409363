import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ROUTE_ORDER, VALUE_ORDER, disk_point_strategy, disk_points
from data import catalog
from data.class_labels import S_STAR
from models.operator_d import (
    AnalyticInput,
    convexity_functional,
    d_from_p_values,
    eval_D,
    eval_D_from_p,
    eval_D_from_phi,
    m_alpha_functional,
    starlike_ratio,
    u_defect,
)
from utils.exceptions import (
    CriticalPoint,
    DenominatorVanish,
    EvaluationOutOfRange,
    UnsupportedRoute,
    ZeroP,
    ZeroValue,
)
from utils.schwarz import (
    SchwarzFunction,
    f_from_p,
    make_member,
    make_u_member,
    p_from_omega,
    random_schwarz,
    starlike_series,
)
from utils.taylor_series import TaylorSeries, div


def test_value_at_origin(catalog_input):
    assert eval_D(catalog_input, 0.0) == 2.0
    assert eval_D(catalog_input, 0.0, route="p") == pytest.approx(2.0)
    assert eval_D(catalog_input, 0.0, route="series") == 2.0


def test_f1_on_the_imaginary_axis():
    assert eval_D(AnalyticInput.from_catalog("f1"), 0.5j) == pytest.approx(8 / 3)


def test_identity_function_has_D_two():
    z = np.array([0.1, -0.5j, 0.3 + 0.4j])
    assert np.allclose(eval_D_from_p(TaylorSeries.constant(1.0, 8), z), 2.0)
    assert np.allclose(eval_D_from_phi(SchwarzFunction.const(0.0), z), 2.0)


def test_koebe_p_series():
    p = div(TaylorSeries([1.0, 1.0], 64), TaylorSeries([1.0, -1.0], 64))
    assert eval_D_from_p(p, 0.5) == pytest.approx(1 + 1.25 / 0.75, abs=1e-10)


def test_p_route_agrees_with_f_built_from_p():
    p = div(TaylorSeries.constant(1.0), TaylorSeries([1.0, -1.0]))
    f = AnalyticInput.from_series(f_from_p(p))
    assert eval_D_from_p(p, 0.3) == pytest.approx(eval_D(f, 0.3), abs=1e-10)


def test_phi_route_for_constant_phi():
    assert eval_D_from_phi(SchwarzFunction.const(1.0), 0.5) == pytest.approx(1.6)
    assert eval_D_from_phi(SchwarzFunction.const(1.0), 0.5) == pytest.approx(eval_D(AnalyticInput.from_catalog("f1"), 0.5))
    assert eval_D_from_phi(SchwarzFunction.monomial(1.0, 1), 0.0) == 2.0


def test_phi_denominator_vanishes():
    with pytest.raises(DenominatorVanish):
        eval_D_from_phi(SchwarzFunction.const(-1.0), 1.0)


def test_u_defect_of_constant_phi_members(rng):
    z = disk_points(rng, 200, 0.9)
    assert np.allclose(u_defect(AnalyticInput.from_catalog("f1"), z), z**2, atol=1e-12)
    assert np.allclose(u_defect(AnalyticInput.from_catalog("k"), z), -(z**2), atol=1e-12)
    assert u_defect(AnalyticInput.from_catalog("f2"), 0.0) == 0


def test_u_defect_of_phi_input():
    phi = SchwarzFunction.monomial(0.5, 1)
    assert u_defect(AnalyticInput.from_phi(phi), 0.4) == pytest.approx(0.4**2 * 0.5 * 0.4)


def test_functionals():
    k = AnalyticInput.from_catalog("k")
    f2 = AnalyticInput.from_catalog("f2")
    assert m_alpha_functional(k, 0.0, 0.5) == pytest.approx(3.0)
    assert m_alpha_functional(f2, 1.0, 0.4) == pytest.approx(1 / 0.6)
    assert convexity_functional(k, 0.0) == 1.0
    assert convexity_functional(f2, 0.5) == pytest.approx(2.0)
    assert starlike_ratio(k, 0.5) == pytest.approx(3.0)


def test_m_alpha_at_minus_one_is_D_minus_one(catalog_input, rng):
    z = disk_points(rng, 200, 0.8)
    assert np.allclose(m_alpha_functional(catalog_input, -1.0, z) + 1, eval_D(catalog_input, z), rtol=1e-10, atol=1e-12)


def test_routes_agree_on_catalog(catalog_name, rng):
    f = AnalyticInput.from_catalog(catalog_name, ROUTE_ORDER)
    wide = disk_points(rng, 200, 0.9)
    inner = disk_points(rng, 200, 0.7)
    assert np.allclose(eval_D(f, wide), eval_D(f, wide, route="p"), rtol=0, atol=1e-8)
    closed = eval_D(f, inner)
    assert np.allclose(closed, eval_D(f, inner, route="series"), rtol=0, atol=1e-8)
    assert np.allclose(closed, eval_D_from_p(starlike_series(f.f_series), inner), rtol=0, atol=1e-8)


@pytest.mark.parametrize("theta", [np.pi / 2, np.pi, 2.0])
def test_rotation_equivariance(catalog_name, theta):
    rotated = AnalyticInput.from_catalog(catalog.rotate(catalog.get(catalog_name, ROUTE_ORDER), theta))
    plain = AnalyticInput.from_catalog(catalog_name, ROUTE_ORDER)
    z = np.array([0.2, 0.5j, -0.3 + 0.5j, 0.65])
    shifted = np.exp(1j * theta) * z
    assert np.allclose(eval_D(rotated, z), eval_D(plain, shifted), atol=1e-10)
    assert np.allclose(eval_D(rotated, z, route="series"), eval_D(plain, shifted), atol=1e-8)


@pytest.mark.parametrize("u1", [0j, 0.1, 0.2j])
def test_D_of_U_members_does_not_depend_on_u1(u1, rng):
    for phi in (SchwarzFunction.const(1.0), random_schwarz(rng, centered=False)):
        member = make_u_member(phi, u1, ROUTE_ORDER)
        z = disk_points(rng, 50, 0.7)
        built = eval_D(AnalyticInput.from_series(member.f_series), z)
        assert np.allclose(built, eval_D_from_phi(phi, z), atol=1e-8)


def test_vectorized_shape(catalog_input):
    z = np.full((3, 4), 0.25j)
    assert eval_D(catalog_input, z).shape == (3, 4)
    assert isinstance(eval_D(catalog_input, 0.25j), complex)


@pytest.mark.parametrize("z", [1.0, 2.0, -1j, np.array([0.5, 0.3 + 0.99j]), complex("nan")])
@pytest.mark.parametrize("route", ["closed", "p", "phi"])
def test_points_outside_the_disk_are_rejected(z, route):
    with pytest.raises(EvaluationOutOfRange):
        eval_D(AnalyticInput.from_catalog("f1"), z, route=route)


def test_critical_point_and_zero_value():
    with pytest.raises(CriticalPoint) as info:
        eval_D(AnalyticInput.from_series(TaylorSeries([0.0, 1.0, 1.0])), -0.5)
    assert info.value.point == pytest.approx(-0.5)
    with pytest.raises(ZeroValue):
        eval_D(AnalyticInput.from_series(TaylorSeries([0.0, 1.0, 2.0])), -0.5)


def test_zero_p():
    with pytest.raises(ZeroP):
        eval_D_from_p(TaylorSeries([1.0, 2.0]), -0.5)


def test_unsupported_routes():
    with pytest.raises(UnsupportedRoute):
        eval_D(AnalyticInput.from_catalog("f2"), 0.3, route="phi")
    with pytest.raises(UnsupportedRoute):
        eval_D(AnalyticInput.from_series(TaylorSeries([0.0, 1.0])), 0.3, route="closed")
    with pytest.raises(UnsupportedRoute):
        eval_D(AnalyticInput.from_catalog("k"), 0.3, route="contour")


def test_normalization_is_checked():
    with pytest.raises(ValueError):
        AnalyticInput.from_series(TaylorSeries([0.0, 2.0]))
    with pytest.raises(ValueError):
        AnalyticInput.from_p(TaylorSeries([2.0, 1.0]))


def test_omega_input_matches_its_member(rng):
    omega = random_schwarz(rng, centered=True)
    from_omega = AnalyticInput.from_omega(S_STAR, omega)
    assert from_omega.default_route == "p"
    z = disk_points(rng, 50, 0.6)
    w, dw = omega(z), omega.derivative(z)
    expected = 2 / (1 - w) - 2 * z * dw / (1 - w**2)
    assert np.allclose(eval_D(from_omega, z), expected, atol=1e-12)
    member = AnalyticInput.from_series(make_member(S_STAR, omega, VALUE_ORDER).f_series)
    assert np.allclose(eval_D(member, z), expected, atol=1e-8)


@given(
    disk_point_strategy(0.9),
    st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False),
    disk_point_strategy(0.95),
)
def test_starlike_representation_closed_form(w, dw, z):
    # p = (1 + w) / (1 - w) gives D = 2 / (1 - w) - 2 z w' / (1 - w^2)
    p, dp = p_from_omega(S_STAR, w, dw)
    expected = 2 / (1 - w) - 2 * z * dw / (1 - w**2)
    assert abs(d_from_p_values(p, dp, z) - expected) <= 1e-9 * max(1.0, abs(expected))

