"""Tests for the explicit inverse: kernel application, norms, and spectra."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torus_dirac import dirac as D
from torus_dirac import inverse as Q
from torus_dirac import modes as M
from torus_dirac.errors import ConfigError, DomainError, RangeCapError


@pytest.fixture(scope="module")
def grid():
    return M.make_radial_grid(64)


def smooth_mode(m, n, grid, seed=0):
    """Axis-regular polynomial data (the class the inverse is exact on)."""
    rng = np.random.default_rng(seed)
    r = grid.nodes
    cs = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    env_f = r ** min(abs(n + 1), 3)
    env_g = r ** min(abs(n), 3)
    return M.SpinorMode(m=m, n=n,
                        f=env_f * (cs[0] + cs[1] * r + cs[2] * r * r),
                        g=env_g * (cs[3] + cs[4] * r + cs[5] * r * r))


# -- applying the inverse ----------------------------------------------------

def test_zero_rhs_gives_zero(grid):
    z = np.zeros(64, dtype=complex)
    out = Q.apply_q_mode(M.SpinorMode(m=3, n=-2, f=z, g=z), grid)
    assert np.all(out.f == 0.0) and np.all(out.g == 0.0)


def test_linearity_in_rhs(grid):
    x = smooth_mode(2, 1, grid, seed=5)
    y = smooth_mode(2, 1, grid, seed=6)
    alpha = 0.7 - 1.3j
    lhs = Q.apply_q_mode(M.SpinorMode(m=2, n=1, f=x.f + alpha * y.f,
                                      g=x.g + alpha * y.g), grid)
    qx, qy = Q.apply_q_mode(x, grid), Q.apply_q_mode(y, grid)
    assert np.allclose(lhs.f, qx.f + alpha * qy.f, rtol=1e-13, atol=1e-15)
    assert np.allclose(lhs.g, qx.g + alpha * qy.g, rtol=1e-13, atol=1e-15)


def test_axial_unit_source_closed_form(grid):
    # m = 0, n = 0 with p = 0, q = 1: the prefix power kernel integrates
    # (1/r) * int_0^r rho drho = r/2, with a minus sign; g stays zero.
    rhs = M.SpinorMode(m=0, n=0, f=np.zeros(64, complex),
                       g=np.ones(64, complex))
    out = Q.apply_q_mode(rhs, grid)
    assert np.max(np.abs(out.f + grid.nodes / 2)) < 1e-13
    assert np.max(np.abs(out.g)) == 0.0


def test_axial_negative_branch_closed_form(grid):
    # m = 0, n = -1 with p = 0, q = 1 uses the reflected branch:
    # f(r) = int_r^1 drho = 1 - r, and the result carries no boundary trace.
    rhs = M.SpinorMode(m=0, n=-1, f=np.zeros(64, complex),
                       g=np.ones(64, complex))
    out = Q.apply_q_mode(rhs, grid)
    assert np.max(np.abs(out.f - (1.0 - grid.nodes))) < 1e-13
    assert np.max(np.abs(out.g)) == 0.0
    assert abs(D.boundary_functional(out)) < 1e-14


@pytest.mark.parametrize("m,n", [
    (1, 0), (-1, 0), (0, 3), (0, -4), (3, -2), (-7, 5),
    (1, -20), (12, 12), (40, 40), (-40, -40),
])
def test_recovers_manufactured_in_domain_mode(grid, m, n):
    # Forward-generate a right-hand side from a known in-domain mode, then
    # invert it back.  The derivative here is the spectral matrix, so this
    # exercises the quadrature for real (no shared identities with Q).
    u = D.project_to_domain(smooth_mode(m, n, grid, seed=7), grid)
    rhs = D.apply_dirac_mode(u, grid)
    v = Q.apply_q_mode(rhs, grid)
    num = M.SpinorMode(m=m, n=n, f=v.f - u.f, g=v.g - u.g).norm_sq(grid)
    assert np.sqrt(num / u.norm_sq(grid)) < 1e-10


@pytest.mark.parametrize("m,n", [(1, 0), (2, -1), (-4, 3), (6, 5), (0, 2)])
def test_inverse_output_satisfies_boundary_constraint(grid, m, n):
    # At moderate orders the output's boundary reading cancels to roundoff.
    out = Q.apply_q_mode(smooth_mode(m, n, grid, seed=3), grid)
    assert abs(D.boundary_functional(out)) < 1e-9


def test_operator_applied_to_inverse_matrix_derivatives(grid):
    # The composition with spectral differentiation is quadrature-limited
    # but must still sit far below the verification tolerance.
    worst = 0.0
    for (m, n) in [(1, 0), (5, -3), (-9, 8), (16, -16)]:
        rhs = smooth_mode(m, n, grid, seed=11)
        back = D.apply_dirac_mode(Q.apply_q_mode(rhs, grid), grid)
        diff = M.SpinorMode(m=m, n=n, f=back.f - rhs.f, g=back.g - rhs.g)
        worst = max(worst, np.sqrt(diff.norm_sq(grid) / rhs.norm_sq(grid)))
    assert worst < 1e-9


def test_operator_applied_to_inverse_closed_form_derivatives(grid):
    # Same composition via the recurrence derivatives: exact cancellation.
    for (m, n) in [(2, 3), (-6, -1), (30, 17)]:
        rhs = smooth_mode(m, n, grid, seed=13)
        inv, fp, gp = Q.apply_q_mode_derivatives(rhs, grid)
        back = D.apply_dirac_mode(inv, grid, f_prime=fp, g_prime=gp)
        diff = M.SpinorMode(m=m, n=n, f=back.f - rhs.f, g=back.g - rhs.g)
        assert np.sqrt(diff.norm_sq(grid) / rhs.norm_sq(grid)) < 1e-12


def test_apply_q_field_matches_modewise(grid):
    fld = M.seeded_field(grid, 2, 2, seed=9)
    out = Q.apply_q(fld)
    for key, md in fld.modes.items():
        ref = Q.apply_q_mode(md, grid)
        assert np.allclose(out.modes[key].f, ref.f, rtol=0, atol=1e-15)
        assert np.allclose(out.modes[key].g, ref.g, rtol=0, atol=1e-15)


def test_circle_frequency_cap(grid):
    z = np.zeros(64, dtype=complex)
    md = M.SpinorMode(m=Q.CIRCLE_FREQ_CAP + 1, n=0, f=z, g=z)
    with pytest.raises(RangeCapError):
        Q.apply_q_mode(md, grid)


def test_radial_order_cap(grid):
    z = np.zeros(64, dtype=complex)
    md = M.SpinorMode(m=1, n=Q.RADIAL_ORDER_CAP + 1, f=z, g=z)
    with pytest.raises(RangeCapError):
        Q.apply_q_mode(md, grid)


def test_nonstandard_grid_rejected():
    # same node count, different layout: the kernel tables cannot apply
    nodes = np.linspace(0.01, 1.0, 64)
    fake = M.RadialGrid(nodes=nodes, weights=np.full(64, 1 / 64.0),
                        diff=np.eye(64))
    md = M.SpinorMode(m=1, n=0, f=np.zeros(64, complex),
                      g=np.zeros(64, complex))
    with pytest.raises(ConfigError):
        Q.apply_q_mode(md, fake)


def test_mode_matrix_reproduces_application(grid):
    for (m, n) in [(3, 1), (-3, 1), (0, 2), (0, -3), (7, -9)]:
        rhs = smooth_mode(m, n, grid, seed=21)
        x = Q.mode_operator_matrix(m, n)
        out = x @ np.concatenate([rhs.f, rhs.g])
        ref = Q.apply_q_mode(rhs, grid)
        assert np.allclose(out[:64], ref.f, rtol=1e-12, atol=1e-14)
        assert np.allclose(out[64:], ref.g, rtol=1e-12, atol=1e-14)


# -- Hilbert-Schmidt norms ---------------------------------------------------

def _spec(fam, i, j, m, n):
    return Q.IntegralOperatorSpec(family=fam, i=i, j=j, m=m, n=n)


# Squared HS norms computed independently by adaptive 2-D quadrature on the
# continuous kernels (nested high-precision rules; estimated error <= 1e-13
# relative on every row).
HS_QUADRATURE_ORACLE = [
    ("R", 0, 0, 1, 0, 5.53570528123193545e-02),
    ("R", 0, 1, 1, 0, 1.59806486821942872e-01),
    ("R", 1, 0, 1, 0, 3.45536137526528337e-03),
    ("R", 1, 1, 1, 0, 8.35341815257660721e-03),
    ("R", 0, 0, 1, 3, 7.90523571719062182e-04),
    ("R", 0, 1, 1, 3, 6.05203865655877804e-02),
    ("R", 1, 0, 1, 3, 6.43219828902153671e-06),
    ("R", 1, 1, 1, 3, 3.70141873900843989e-04),
    ("R", 0, 0, 4, -2, 9.19630096441376513e-03),
    ("R", 0, 1, 4, -2, 3.70518283806138809e-03),
    ("R", 1, 0, 4, -2, 5.08415490125875696e-02),
    ("R", 1, 1, 4, -2, 1.61787576948345183e-02),
    ("R", 0, 0, 10, 0, 1.21385437655608230e-02),
    ("R", 0, 1, 10, 0, 1.62179818000238070e-02),
    ("R", 1, 0, 10, 0, 8.12557368391002809e-03),
    ("R", 1, 1, 10, 0, 9.83366947285673615e-03),
    ("R", 0, 0, 7, -7, 2.00444435260240016e-03),
    ("R", 0, 1, 7, -7, 2.82497764171906840e-04),
    ("R", 1, 0, 7, -7, 2.48785292414130145e-02),
    ("R", 1, 1, 7, -7, 2.64841188449085147e-03),
    ("R", 0, 1, 1, 40, 6.09574698691437312e-03),
    ("R", 0, 1, 40, 40, 4.32175388285319095e-03),
    ("S", 0, 1, 1, 0, 3.45536137526528337e-03),
    ("S", 1, 0, 1, 0, 1.59806486821942872e-01),
    ("S", 0, 1, 4, -2, 5.08415490125875696e-02),
    ("S", 1, 0, 4, -2, 3.70518283806138809e-03),
    ("S", 0, 1, 10, 0, 8.12557368391002809e-03),
    ("S", 1, 0, 10, 0, 1.62179818000238070e-02),
    ("S", 1, 0, 25, -33, 2.64813476936702006e-05),
]


@pytest.mark.parametrize("fam,i,j,m,n,want", HS_QUADRATURE_ORACLE)
def test_hs_norm_against_independent_quadrature(fam, i, j, m, n, want):
    got = Q.hs_norm_sq(_spec(fam, i, j, m, n))
    assert got == pytest.approx(want, rel=1e-10)


@pytest.mark.parametrize("kind", ["T1", "T2"])
@pytest.mark.parametrize("n", [0, 1, 7, 33, 50])
def test_axial_norm_matches_closed_form(kind, n):
    got = Q.hs_norm_sq(Q.IntegralOperatorSpec(family=kind, m=0, n=n))
    assert got == pytest.approx(Q.t_norm_target(n), rel=1e-10)
    assert Q.t_norm_target(0) == 0.25


@pytest.mark.parametrize("m,n", [(1, 0), (1, 40), (6, -11), (40, 40)])
def test_triangle_orientations_agree(m, n):
    # same kernel integrated along the two independent chain directions
    r01 = Q.hs_norm_sq(_spec("R", 0, 1, m, n))
    s10 = Q.hs_norm_sq(_spec("S", 1, 0, m, n))
    assert r01 == pytest.approx(s10, rel=1e-10)


@pytest.mark.parametrize("m,n", [(1, 0), (3, -5), (9, 12)])
def test_index_shift_identity(m, n):
    for fam in ("R", "S"):
        a = Q.hs_norm_sq(_spec(fam, 1, 1, m, n))
        b = Q.hs_norm_sq(_spec(fam, 0, 0, m, n + 1))
        assert a == pytest.approx(b, rel=1e-10)


@pytest.mark.parametrize("m,n", [(1, 0), (2, 7), (5, -3), (17, -30), (40, 40)])
def test_order_monotonicity_chains(m, n):
    slacks = Q.ordering_chain_slacks(m, n)
    assert set(slacks) == {"R00-R10", "R01-R00", "S00-S01", "S10-S00"}
    assert min(slacks.values()) >= -1e-10


def test_quantitative_norm_bounds():
    # the proof-level bounds: 1/(4|n|) for n != 0 and 1/|m| always
    assert Q.hs_norm_sq(_spec("R", 0, 1, 4, 3)) <= min(1 / 12, 1 / 4)
    for (m, n) in [(1, 0), (2, -6), (9, 9), (40, -1)]:
        v = Q.hs_norm_sq(_spec("R", 0, 1, m, n))
        assert v <= 1.0 / m + 1e-10
        if n != 0:
            assert v <= 1.0 / (4 * abs(n)) + 1e-10


def test_family_spec_validation():
    with pytest.raises(DomainError):
        _spec("R", 0, 0, 0, 1)          # triangle families need m != 0
    with pytest.raises(DomainError):
        Q.IntegralOperatorSpec(family="T1", m=2, n=0)
    with pytest.raises(DomainError):
        Q.IntegralOperatorSpec(family="T2", m=0, n=-1)
    with pytest.raises(DomainError):
        Q.IntegralOperatorSpec(family="X", m=1, n=0)
    with pytest.raises(DomainError):
        _spec("S", 2, 0, 1, 0)
    with pytest.raises(DomainError):
        Q.t_norm_target(-1)


# -- spectra and operator-norm bounds ----------------------------------------

@pytest.mark.parametrize("m,n", [(0, 0), (1, 0), (5, -3), (12, 7)])
def test_singular_values_descending_nonnegative(m, n):
    sig = Q.singular_values(m, n)
    assert sig.shape == (128,)
    assert np.all(sig >= 0.0)
    assert np.all(np.diff(sig) <= 1e-15)


@pytest.mark.parametrize("m,n", [(1, 0), (4, -6), (13, 2)])
def test_spectrum_ignores_frequency_sign(m, n):
    a = Q.singular_values(m, n)
    b = Q.singular_values(-m, n)
    assert np.allclose(a, b, rtol=1e-10, atol=1e-14)


@pytest.mark.parametrize("m,n", [(1, 0), (3, 2), (8, 0), (16, 16)])
def test_spectrum_mass_below_hs_total(m, n):
    # the discretized spectrum can only underestimate the kernel's HS mass
    sig = Q.singular_values(m, n)
    hs = sum(Q.hs_norm_sq(_spec(fam, i, j, m, n))
             for fam in ("R", "S") for i in (0, 1) for j in (0, 1))
    assert float(np.sum(sig ** 2)) <= hs + 1e-10


@pytest.mark.parametrize("m,n", [(0, 0), (0, 5), (1, 0), (7, -4), (20, 20)])
def test_largest_singular_value_below_block_bound(m, n):
    assert Q.singular_values(m, n)[0] <= Q.block_operator_bound(m, n) + 1e-8


@pytest.mark.parametrize("m,n", [(3, 2), (8, -5), (0, 6)])
def test_spectrum_stable_under_grid_refinement(m, n):
    a = Q.singular_values(m, n, node_count=64)[0]
    b = Q.singular_values(m, n, node_count=128)[0]
    assert abs(a - b) < 1e-8


def test_sup_integral_elementary_bounds():
    i1, i2 = Q.sup_integrals(10, 0)
    assert 0.0 < i1 <= 0.2            # min(2/(n+1), 2/|m|) at this mode
    assert 0.0 < i2
    for (m, n) in [(2, 5), (6, -6)]:
        i1, i2 = Q.sup_integrals(m, n)
        assert i1 * i2 > 0.0
    with pytest.raises(DomainError):
        Q.sup_integrals(0, 3)


def test_transpose_members_share_schur_bound():
    # a kernel and its transpose have the same row/column sup pair
    for (m, n) in [(3, 2), (5, -4), (1, 0)]:
        r = Q.schur_young_bound(_spec("R", 0, 1, m, n))
        s = Q.schur_young_bound(_spec("S", 1, 0, m, n))
        assert r == s and r > 0.0


@pytest.mark.parametrize("m,n,p", [(1, 0, 2.5), (5, -3, 3.5), (12, 7, 4.0),
                                   (0, 4, 3.5)])
def test_power_sum_interpolation_consistency(m, n, p):
    sig = Q.singular_values(m, n)
    lhs = float(np.sum(sig ** p))
    rhs = float(np.sum(sig ** 2)) * sig[0] ** (p - 2)
    assert lhs <= rhs + 1e-10


# -- tables and partial sums -------------------------------------------------

def test_decay_table_layout():
    tab = Q.decay_table(2, 2, with_spectra=False)
    fams = {r.family for r in tab}
    assert fams == {"R", "S", "T1", "T2"}
    r_rows = [r for r in tab if r.family == "R"]
    assert len(r_rows) == 2 * 5 * 4        # m in 1..2, n in -2..2, (i,j) pairs
    t_rows = [r for r in tab if r.family == "T1"]
    assert [r.n for r in t_rows] == [0, 1, 2]
    assert all(r.hs_norm_sq > 0.0 for r in tab)
    assert all(r.mode == (r.m, r.n) for r in tab)


def test_decay_table_spectra_and_bounds():
    tab = Q.decay_table(2, 1, with_spectra=True)
    for row in tab:
        assert row.op_norm_bound > 0.0
        if row.singular_values:
            assert row.singular_values[0] <= row.op_norm_bound + 1e-8
            assert sum(s * s for s in row.singular_values) \
                <= row.hs_norm_sq + 1e-10


def test_envelope_constant_covers_table():
    c = Q.fitted_envelope_constant(6, 6)
    tab = Q.decay_table(6, 6, with_spectra=False)
    for row in tab:
        assert row.hs_norm_sq <= c / np.sqrt(1 + row.m ** 2 + row.n ** 2) + 1e-12


def test_schatten_sum_deterministic_and_monotone():
    a = Q.schatten_partial_sum(3.5, 6, 6)
    b = Q.schatten_partial_sum(3.5, 6, 6)
    assert a == b
    assert Q.schatten_partial_sum(3.5, 8, 8) > a


def test_schatten_rejects_exponent_at_or_below_two():
    for p in (2.0, 1.5, -1.0):
        with pytest.raises(DomainError):
            Q.schatten_partial_sum(p, 4, 4)


def test_schatten_sum_matches_explicit_table():
    table = Q.singular_value_table(3, 3)
    direct = Q.schatten_partial_sum(4.0, 3, 3, sigma_table=table)
    manual = 0.0
    for m in range(-3, 4):
        for n in range(-3, 4):
            manual += float(np.sum(table[(abs(m), n)] ** 4.0))
    assert direct == pytest.approx(manual, rel=1e-14)
    assert direct == pytest.approx(Q.schatten_partial_sum(4.0, 3, 3), rel=1e-14)


# -- residual reports --------------------------------------------------------

def test_residual_check_zero_field(grid):
    z = np.zeros(64, dtype=complex)
    fld = M.SpinorField(grid, 1, 1, {(m, n): M.SpinorMode(m=m, n=n, f=z, g=z)
                                     for m in (-1, 0, 1) for n in (-1, 0, 1)})
    rows = Q.residual_check(fld)
    assert all(r.dq_residual == 0.0 and r.qd_residual == 0.0 for r in rows)


def test_residual_check_smooth_field(grid):
    fld = M.seeded_field(grid, 6, 6, seed=4)
    rows = Q.residual_check(fld, derivative_mode="analytic")
    assert max(r.dq_residual for r in rows) < 1e-10
    assert max(r.qd_residual for r in rows) < 1e-10
    assert [(r.m, r.n) for r in rows] == sorted(fld.modes)


def test_residual_check_matrix_mode(grid):
    fld = M.seeded_field(grid, 4, 4, seed=8)
    rows = Q.residual_check(fld, derivative_mode="matrix")
    assert max(r.dq_residual for r in rows) < 1e-8


def test_residual_check_rejects_unknown_mode(grid):
    fld = M.seeded_field(grid, 1, 1, seed=2)
    with pytest.raises(ConfigError):
        Q.residual_check(fld, derivative_mode="exact")


@given(m=st.integers(-10, 10), n=st.integers(-10, 10),
       scale=st.complex_numbers(min_magnitude=0.1, max_magnitude=5,
                                allow_infinity=False, allow_nan=False))
@settings(max_examples=25, deadline=None)
def test_inverse_scales_homogeneously(m, n, scale):
    grid = M.make_radial_grid(64)
    rhs = smooth_mode(m, n, grid, seed=17)
    scaled = M.SpinorMode(m=m, n=n, f=scale * rhs.f, g=scale * rhs.g)
    a = Q.apply_q_mode(scaled, grid)
    b = Q.apply_q_mode(rhs, grid)
    assert np.allclose(a.f, scale * b.f, rtol=1e-12, atol=1e-14)
    assert np.allclose(a.g, scale * b.g, rtol=1e-12, atol=1e-14)
