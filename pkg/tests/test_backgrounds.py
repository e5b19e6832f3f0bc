"""Gauge potentials, local field data and separated-equation coefficients."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from coxlab.backgrounds import (
    BackgroundSpec,
    QuantumNumbers,
    assemble_axial_ode,
    assemble_radial_ode,
    electric_strength_parameter,
    field_components,
    flat_equivalent_magnetic_b,
    gamma_profile,
    gauge_potential,
    magnetic_strength_parameter,
    metric_at,
)
from coxlab.errors import DomainError, InvalidEta, ParameterError
from coxlab.tensor_algebra import field_invariants


def _spec(geometry, field="magnetic", **kw):
    return BackgroundSpec(geometry=geometry, field=field, **kw)


# ---------------------------------------------------------------------------
# spec validation
# ---------------------------------------------------------------------------

def test_background_spec_validation():
    with pytest.raises(ParameterError):
        BackgroundSpec(geometry="euclidean")
    with pytest.raises(ParameterError):
        BackgroundSpec(geometry="flat", field="dyonic")
    with pytest.raises(ParameterError):
        BackgroundSpec(geometry="spherical", rho=0.0)
    with pytest.raises(InvalidEta):
        BackgroundSpec(geometry="flat", field="magnetic", eta=1.5)
    # eta is unconstrained for electric configurations
    BackgroundSpec(geometry="flat", field="electric", eta=1.5)


def test_quantum_numbers_validation():
    with pytest.raises(ParameterError):
        QuantumNumbers(n=-1, m=0)
    qn = QuantumNumbers(n=2, m=-3, k=0.5)
    assert (qn.n, qn.m, qn.k) == (2, -3, 0.5)


# ---------------------------------------------------------------------------
# gauge potentials
# ---------------------------------------------------------------------------

def test_gauge_potential_flat_magnetic():
    """A_phi = -B r^2/2 with B = 2b, so b=1 gives A_phi(1) = -1."""
    spec = _spec("flat", b=1.0)
    assert gauge_potential(spec, 0.0) == 0.0
    assert_allclose(gauge_potential(spec, 1.0), -1.0, rtol=0, atol=0)
    with pytest.raises(DomainError):
        gauge_potential(spec, -0.1)


def test_gauge_potential_small_r_matches_flat():
    """Both curved potentials reduce to -b r^2/2 near the axis."""
    r = 1e-3
    for geo in ("lobachevsky", "spherical"):
        spec = _spec(geo, b=3.0)
        assert_allclose(gauge_potential(spec, r), -3.0 * r * r / 2, rtol=1e-6)


def test_gauge_potential_spherical_domain():
    spec = _spec("spherical", b=1.0)
    assert_allclose(gauge_potential(spec, math.pi), -2.0)
    with pytest.raises(DomainError):
        gauge_potential(spec, math.pi + 0.01)


def test_gauge_potential_electric():
    flat = _spec("flat", "electric", nu=2.0)
    assert_allclose(gauge_potential(flat, 1.5), -3.0)
    lob = _spec("lobachevsky", "electric", nu=2.0)
    assert gauge_potential(lob, 0.0) == 0.0
    assert_allclose(gauge_potential(lob, 50.0), -2.0, rtol=1e-12)  # saturates
    sph = _spec("spherical", "electric", nu=1.0)
    assert_allclose(gauge_potential(sph, math.pi / 4), -1.0, rtol=1e-12)
    with pytest.raises(DomainError):
        gauge_potential(sph, math.pi / 2)


# ---------------------------------------------------------------------------
# local field components and invariants
# ---------------------------------------------------------------------------

def test_flat_magnetic_invariant_uniform():
    """|I| = B^2 = (2b)^2 everywhere: the flat field is genuinely uniform."""
    spec = _spec("flat", b=1.0)
    for r, z in [(0.3, 0.0), (0.7, 3.0), (2.0, -1.0)]:
        fields, inv = field_components(spec, z, r=r)
        assert fields.B[2] == -2.0 * r
        assert_allclose(inv, 4.0, rtol=1e-12)


def test_lobachevsky_magnetic_invariant_profile():
    """|I| = b^2/ch^4 z, independent of r: uniform on each z-slice, dying off axially."""
    spec = _spec("lobachevsky", b=2.0)
    for r in (0.4, 0.9, 2.0):
        _, inv = field_components(spec, 1.0, r=r)
        assert_allclose(inv, 4.0 / math.cosh(1.0) ** 4, rtol=1e-12)
    _, inv0 = field_components(spec, 0.0, r=1.0)
    assert_allclose(inv0, 4.0, rtol=1e-12)
    _, inv_far = field_components(spec, 8.0, r=1.0)
    assert inv_far < 1e-5


def test_spherical_magnetic_invariant_grows_to_poles():
    spec = _spec("spherical", b=1.0)
    zs = [0.0, 0.5, 1.0, 1.4, 1.55]
    invs = [field_components(spec, z, r=0.8)[1] for z in zs]
    assert all(b > a for a, b in zip(invs, invs[1:]))
    assert_allclose(invs[0], 1.0, rtol=1e-12)
    assert_allclose(invs[2], 1.0 / math.cos(1.0) ** 4, rtol=1e-12)


def test_electric_components_and_invariant():
    lob = _spec("lobachevsky", "electric", nu=3.0)
    fields, inv = field_components(lob, 1.2, r=0.5)
    assert_allclose(fields.E[2], 3.0 / math.cosh(1.2) ** 2, rtol=1e-12)
    assert_allclose(inv, 9.0 / math.cosh(1.2) ** 4, rtol=1e-12)
    flat = _spec("flat", "electric", nu=3.0)
    _, inv_flat = field_components(flat, 5.0, r=0.5)
    assert_allclose(inv_flat, 9.0, rtol=1e-12)


def test_field_components_bridge_to_tensor_invariants():
    """Recompute I and J from the raw tensor layer: magnetic I < 0, J = 0."""
    spec = _spec("lobachevsky", b=2.5)
    r, z = 0.8, 0.6
    fields, inv = field_components(spec, z, r=r)
    res = field_invariants(fields, metric_at(spec, r, z))
    assert_allclose(res.I, -2.5**2 / math.cosh(z) ** 4, rtol=1e-12)
    assert res.J == 0.0
    assert_allclose(inv, abs(res.I), rtol=0, atol=0)


def test_gamma_profile():
    lob = _spec("lobachevsky", b=1.0, gamma=0.4)
    assert_allclose(gamma_profile(lob, 0.0), 0.4)
    assert_allclose(gamma_profile(lob, 1.0), 0.4 / math.cosh(1.0) ** 2)
    assert_allclose(gamma_profile(lob, -1.0), gamma_profile(lob, 1.0))  # even
    sph = _spec("spherical", b=1.0, gamma=0.4)
    assert_allclose(gamma_profile(sph, 1.0), 0.4 / math.cos(1.0) ** 2)
    flat = _spec("flat", b=1.0, eta=0.3)
    assert_allclose(gamma_profile(flat, [0.0, 2.0]), [0.3, 0.3])


def test_strength_parameter_conversions():
    assert magnetic_strength_parameter(2.0, 1.0, "flat") == 1.0
    assert magnetic_strength_parameter(0.05, 10.0, "lobachevsky") == 5.0
    assert electric_strength_parameter(3.0, 1.0, 0.5, "flat") == 3.0
    assert electric_strength_parameter(2.0, 2.0, 1.0, "spherical") == 32.0
    spec = _spec("spherical", b=80.0, rho=40.0)
    assert_allclose(flat_equivalent_magnetic_b(spec), 0.025)
    assert flat_equivalent_magnetic_b(_spec("flat", b=1.5)) == 1.5


# ---------------------------------------------------------------------------
# radial equations: coefficients verbatim
# ---------------------------------------------------------------------------

def test_radial_flat_magnetic_coefficients():
    ode = assemble_radial_ode(_spec("flat", b=1.0), QuantumNumbers(n=0, m=2))
    rs = np.array([0.3, 1.0, 2.5])
    assert_allclose(ode.pcoef(rs), 1.0 / rs, rtol=1e-15)
    expected = 7.0 - (2.0 - rs**2) ** 2 / rs**2
    assert_allclose(ode.qcoef(rs, 7.0), expected, rtol=1e-14)
    assert ode.eigen_name == "eps_prime"
    assert ode.weight(2.0) == 2.0


def test_radial_lobachevsky_magnetic_coefficients():
    ode = assemble_radial_ode(_spec("lobachevsky", b=5.0), QuantumNumbers(n=0, m=1))
    rs = np.array([0.2, 0.9, 3.0])
    assert_allclose(ode.pcoef(rs), np.cosh(rs) / np.sinh(rs), rtol=1e-14)
    expected = 13.0 - (1.0 - 5.0 * (np.cosh(rs) - 1.0)) ** 2 / np.sinh(rs) ** 2
    assert_allclose(ode.qcoef(rs, 13.0), expected, rtol=1e-14)
    assert ode.eigen_name == "Lambda"
    assert_allclose(ode.weight(rs), np.sinh(rs))


def test_radial_spherical_magnetic_coefficients():
    ode = assemble_radial_ode(_spec("spherical", b=2.0), QuantumNumbers(n=1, m=-1))
    rs = np.array([0.4, 1.5, 2.8])
    assert_allclose(ode.pcoef(rs), np.cos(rs) / np.sin(rs), rtol=1e-13)
    expected = 4.0 - (-1.0 + 2.0 * (np.cos(rs) - 1.0)) ** 2 / np.sin(rs) ** 2
    assert_allclose(ode.qcoef(rs, 4.0), expected, rtol=1e-13)
    assert ode.domain == (0.0, math.pi)
    labels = {p.label for p in ode.singular_points}
    assert labels == {"axis", "antipode"}


def test_radial_electric_coefficients():
    flat = assemble_radial_ode(_spec("flat", "electric", nu=1.0), QuantumNumbers(0, 3))
    assert_allclose(flat.qcoef(2.0, 1.0), 1.0 - 9.0 / 4.0)
    assert flat.eigen_name == "w_perp"
    lob = assemble_radial_ode(_spec("lobachevsky", "electric", nu=1.0), QuantumNumbers(0, 2))
    assert_allclose(lob.qcoef(1.0, 0.0), -4.0 / math.sinh(1.0) ** 2)
    sph = assemble_radial_ode(_spec("spherical", "electric", nu=1.0), QuantumNumbers(0, 2))
    assert_allclose(sph.qcoef(1.0, 0.0), -4.0 / math.sin(1.0) ** 2)


@given(
    s=st.floats(min_value=-20.0, max_value=20.0),
    r=st.floats(min_value=0.05, max_value=3.0),
)
@settings(max_examples=40, deadline=None)
def test_radial_eigen_enters_additively(s, r):
    ode = assemble_radial_ode(_spec("lobachevsky", b=2.0), QuantumNumbers(0, 1))
    assert_allclose(ode.qcoef(r, s), ode.qcoef(r, 0.0) + s, rtol=0, atol=1e-9)


# ---------------------------------------------------------------------------
# axial equations: coefficients verbatim
# ---------------------------------------------------------------------------

def test_axial_flat_magnetic_rejected():
    with pytest.raises(ParameterError):
        assemble_axial_ode(_spec("flat", b=1.0), 2.0)


def test_axial_lobachevsky_magnetic_coefficients():
    """Z'' + 2 th z Z' + (eps - U) Z = 0 with U = -(b g - L ch^2 z)/(ch^4 z - g^2)."""
    L, b, g, eps = 13.0, 5.0, 0.2, 3.0
    ode = assemble_axial_ode(_spec("lobachevsky", b=b, gamma=g), L, epsilon=eps)
    zs = np.array([-1.3, 0.0, 0.5, 2.0])
    assert_allclose(ode.pcoef(zs), 2.0 * np.tanh(zs), rtol=1e-15)
    ch2 = np.cosh(zs) ** 2
    U = -(b * g - L * ch2) / (ch2**2 - g**2)
    assert_allclose(ode.qcoef(zs, 0.0), eps - U, rtol=1e-14)
    # companion normal form: f = Z ch z shifts the constant by -1
    schro = ode.schrodinger
    assert_allclose(schro.pcoef(zs), np.zeros(4))
    assert_allclose(schro.qcoef(zs, 0.0), ode.qcoef(zs, 0.0) - 1.0, rtol=1e-14)


def test_axial_spherical_magnetic_coefficients():
    """Z'' - 2 tg z Z' + (eps - U) Z = 0 with U = (b g + L cos^2 z)/(cos^4 z - g^2)."""
    L, b, g, eps = 5.0, 1.0, 0.3, 2.0
    ode = assemble_axial_ode(_spec("spherical", b=b, gamma=g), L, epsilon=eps)
    zs = np.array([-1.0, 0.2, 1.1])
    assert_allclose(ode.pcoef(zs), -2.0 * np.tan(zs), rtol=1e-14)
    c2 = np.cos(zs) ** 2
    U = (b * g + L * c2) / (c2**2 - g**2)
    assert_allclose(ode.qcoef(zs, 0.0), eps - U, rtol=1e-13)
    assert_allclose(ode.schrodinger.qcoef(zs, 0.0), ode.qcoef(zs, 0.0) + 1.0, rtol=1e-13)
    assert ode.domain == (-math.pi / 2, math.pi / 2)


def test_axial_magnetic_singular_points():
    g = 0.25
    ode = assemble_axial_ode(_spec("lobachevsky", b=1.0, gamma=g), 2.0)
    locs = sorted(p.location for p in ode.singular_points)
    assert locs == [-g, 0.0, g, 1.0, math.inf]
    assert len(ode.singular_points) == 5


def test_axial_flat_electric_coefficients():
    """q = w' + nu z with w' = w - w_perp + (1/lc^2) g^2/(1+g^2)."""
    w_perp, w, g, lc, nu = 2.0, 5.0, 0.3, 0.25, 1.5
    spec = _spec("flat", "electric", nu=nu, gamma=g)
    ode = assemble_axial_ode(spec, w_perp, w=w, compton=lc)
    w_prime = w - w_perp + g * g / ((1 + g * g) * lc * lc)
    assert_allclose(ode.params["w_prime"], w_prime, rtol=1e-15)
    zs = np.array([-2.0, 0.0, 1.0])
    assert_allclose(ode.qcoef(zs, 0.0), w_prime + nu * zs, rtol=1e-14)
    assert_allclose(ode.pcoef(zs), np.zeros(3))


def test_axial_lobachevsky_electric_coefficients():
    """Transcription check against the longhand coefficient at sample points."""
    L, g, nu, w, mu2 = 3.0, 0.4, 2.0, 1.0, 2.25
    mu = math.sqrt(mu2)
    spec = _spec("lobachevsky", "electric", nu=nu, gamma=g)
    ode = assemble_axial_ode(spec, L, w=w, mu2=mu2)
    for z in (-0.9, 0.3, 0.7, 1.8):
        ch, sh = math.cosh(z), math.sinh(z)
        D = ch**4 + g * g
        q_hand = (
            -2 * mu * g * sh * ch * (g * g - ch**4) / D**2
            - 2 * mu * g * sh * ch / D
            + w
            + nu * math.tanh(z)
            - mu2 * g * g / D
            - L / ch**2
        )
        assert_allclose(ode.qcoef(z, 0.0), q_hand, rtol=1e-14)
        assert_allclose(ode.pcoef(z), 2 * math.tanh(z), rtol=1e-15)


def test_axial_spherical_electric_coefficients():
    """Raw second-derivative factor c2 = (cos^4 z + 2 g^2)/(cos^4 z + g^2) divided out."""
    L, g, nu, w, mu2 = 2.0, 0.35, 1.0, 0.5, 4.0
    mu = 2.0
    spec = _spec("spherical", "electric", nu=nu, gamma=g)
    ode = assemble_axial_ode(spec, L, w=w, mu2=mu2)
    for z in (-1.1, -0.4, 0.2, 0.9):
        cz, sz = math.cos(z), math.sin(z)
        u = cz**4
        D = u + g * g
        c2 = (u + 2 * g * g) / D
        c1 = (
            -2 * (sz / cz) * (g * g * u + 2 * g**4 + u * u) / D**2
            - mu * g * cz * cz / D
        )
        c0 = (
            4 * mu * g**3 * sz * cz / D**2
            + w
            + nu * math.tan(z)
            - mu2 * g * g / D
            - L / cz**2
        )
        assert_allclose(ode.pcoef(z), c1 / c2, rtol=1e-13)
        assert_allclose(ode.qcoef(z, 0.0), c0 / c2, rtol=1e-13)


@given(
    z=st.floats(min_value=-2.0, max_value=2.0),
    s=st.floats(min_value=-5.0, max_value=5.0),
)
@settings(max_examples=40, deadline=None)
def test_axial_eigen_offset_additive(z, s):
    ode = assemble_axial_ode(
        _spec("lobachevsky", b=2.0, gamma=0.1), 6.0, epsilon=1.0
    )
    assert_allclose(ode.qcoef(z, s), ode.qcoef(z, 0.0) + s, rtol=0, atol=1e-10)


# ---------------------------------------------------------------------------
# flat-space limit of the curved radial coefficients
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("geo", ["lobachevsky", "spherical"])
def test_radial_flat_limit_coherence(geo):
    """At curvature radius rho, the curved equation evaluated at r = s/rho
    reproduces the flat equation at s to O(1/rho^2): p_c(s/rho)/rho -> 1/s and
    q_c(s/rho, rho^2 e)/rho^2 -> q_f(s, e), with b_curved = 2 b_flat rho^2."""
    rho = 1e4
    b_flat, m, eps = 1.0, 2, 7.0
    flat = assemble_radial_ode(_spec("flat", b=b_flat), QuantumNumbers(0, m))
    curved = assemble_radial_ode(
        _spec(geo, b=2.0 * b_flat * rho**2, rho=rho), QuantumNumbers(0, m)
    )
    for s in (0.5, 1.5, 3.0):
        assert abs(curved.pcoef(s / rho) / rho - flat.pcoef(s)) < 1e-6
        qf = flat.qcoef(s, eps)
        qc = curved.qcoef(s / rho, rho**2 * eps) / rho**2
        assert abs(qc - qf) < 1e-6 * max(1.0, abs(qf))
