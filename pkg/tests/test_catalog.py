import numpy as np
import pytest

from conftest import VALUE_ORDER, disk_points
from data import catalog
from data.class_labels import K, M_MINUS_ONE, S_STAR, U, MembershipStatus
from utils.exceptions import UnknownFunction


def test_names():
    assert catalog.list_names() == ("k", "f1", "f2", "f3")


def test_unknown_function():
    with pytest.raises(UnknownFunction):
        catalog.get("f9")


def test_D_is_two_at_origin(catalog_name):
    assert catalog.closed_D(catalog_name, 0.0) == 2.0


def test_known_values():
    assert catalog.closed_D("f1", 0.5j) == pytest.approx(8 / 3)
    assert catalog.closed_D("k", 0.5) == pytest.approx(1 + 1.25 / 0.75)
    assert catalog.closed_D("f2", 0.24).real == pytest.approx(1.985, abs=1e-3)
    assert catalog.closed_D("f2", 0.9).real < 0


def test_f2_small_argument_branch_agrees_with_formula():
    for z in (5e-4, -5e-4j, 3e-4 + 3e-4j):
        series_value = catalog.closed_D("f2", z)
        formula_value = catalog._D_f2_formula(np.asarray(z, dtype=complex))
        assert abs(series_value - formula_value) < 1e-9


def test_D_matches_its_definition(catalog_name, rng):
    fn = catalog.get(catalog_name)
    z = disk_points(rng, 300, 0.8)
    z = z[np.abs(z) > 1e-2]
    f, df, d2f = fn.closed_eval(z)
    definition = 2 * z * df / f - z * d2f / df
    assert np.allclose(fn.closed_D(z), definition, rtol=1e-9, atol=1e-9)


def test_series_coefficients():
    assert np.allclose(catalog.get("k", 10).series.coeffs, np.arange(11))
    assert np.allclose(catalog.get("f1", 6).series.coeffs, [0, 1, 0, 1, 0, 1, 0])
    assert np.allclose(catalog.get("f2", 4).series.coeffs, [0, 1, 1 / 2, 1 / 3, 1 / 4])
    f3 = catalog.get("f3", 4).series.coeffs
    assert np.allclose(f3, [0, 1, -1 / np.sqrt(2), 1, -1 / np.sqrt(2)])


def test_series_match_closed_forms(catalog_name, rng):
    fn = catalog.get(catalog_name, VALUE_ORDER)
    series = fn.series
    z = disk_points(rng, 100, 0.7)
    f, df, d2f = fn.closed_eval(z)
    assert np.allclose(series(z), f, atol=1e-8)
    assert np.allclose(series.derivative()(z), df, atol=1e-8)


def test_f3_numerator_root_and_monotonicity():
    assert abs(catalog.f3_g(1 / np.sqrt(2))) < 1e-12
    r = np.linspace(0, 0.999, 1000)
    assert np.all(catalog.f3_g_prime(r) < 0)
    assert catalog.f3_g(0.75).real < 0 < catalog.f3_g(0.7).real


def test_f3_denominator_has_no_zeros_inside_the_disk():
    theta = np.linspace(0, 2 * np.pi, 2048, endpoint=False)
    for r in (0.1, 0.5, 0.9, 0.99):
        assert np.min(np.abs(catalog.f3_h(r * np.exp(1j * theta)))) > 0


def test_rotation_conjugates_the_argument(catalog_name):
    fn = catalog.get(catalog_name, VALUE_ORDER)
    theta = 0.9
    rotated = catalog.rotate(fn, theta)
    z = np.array([0.3, -0.2 + 0.4j, 0.6j])
    e = np.exp(1j * theta)
    assert np.allclose(rotated.closed_D(z), fn.closed_D(e * z))
    assert np.allclose(rotated.series(z), fn.closed_eval(e * z)[0] / e, atol=1e-10)
    assert rotated.name == f"{catalog_name}@0.9"


def test_rotating_by_zero_is_identity():
    fn = catalog.get("k")
    assert catalog.rotate(fn, 0.0) is fn


def test_rotated_U_members_keep_a_constant_phi():
    rotated = catalog.rotate(catalog.get("f1"), np.pi / 2)
    assert rotated.u_phi.constant == pytest.approx(-1.0)


def test_membership_facts():
    assert catalog.get("f2").membership(K).status is MembershipStatus.MEMBER
    assert catalog.get("f2").membership(U).status is MembershipStatus.NON_MEMBER
    assert catalog.get("f3").membership(M_MINUS_ONE).status is MembershipStatus.NON_MEMBER
    assert catalog.get("k").membership(S_STAR).status is MembershipStatus.MEMBER
    assert catalog.get("f3").membership(K) is None


@pytest.mark.parametrize("name", ["k", "f1"])
def test_re_D_exceeds_one_for_U_members_with_constant_phi(name):
    theta = np.linspace(0, 2 * np.pi, 128, endpoint=False)
    radii = np.linspace(0.99 / 128, 0.99, 128)
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    assert np.all(catalog.closed_D(name, z).real > 1)


def test_catalog_table():
    table = catalog.catalog_table()
    assert list(table.columns) == ["name", "f", "D", "members", "non_members"]
    assert list(table["name"]) == ["k", "f1", "f2", "f3"]
    assert "U" in table.set_index("name").loc["f2", "non_members"]


def test_to_dict_lists_series_head():
    payload = catalog.get("k").to_dict()
    assert payload["u_phi"] == "const:-1.0"
    assert payload["series_head"][3] == [3.0, 0.0]
