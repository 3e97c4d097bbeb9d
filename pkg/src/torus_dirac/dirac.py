"""The first-order operator on mode pairs, its homogeneous solutions, and
the nonlocal boundary data they define.

On a coupled pair at frequencies (m; n+1, n) the operator acts as

    p = m f + g' - (n/r) g          (lands in the f slot)
    q = -m g - f' - ((n+1)/r) f     (lands in the g slot)

Its kernel on a mode is spanned by modified-Bessel profiles (powers of r
when m = 0); the boundary functional below is calibrated so the solution
regular at the axis has functional value exactly 1, which makes it both
the admissibility constraint ("in domain" = functional zero) and the
coefficient extractor for exterior matching.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from . import bessel
from .errors import DomainError
from .modes import RadialGrid, SpinorField, SpinorMode, make_radial_grid

__all__ = [
    "apply_dirac_mode", "apply_dirac", "homogeneous_solution",
    "regular_unit_solution", "boundary_functional", "exterior_coefficients",
    "evaluate_exterior", "inner_product", "greens_boundary_pairing",
    "project_to_domain", "project_field_to_domain",
]


def apply_dirac_mode(mode: SpinorMode, grid: RadialGrid,
                     f_prime: np.ndarray | None = None,
                     g_prime: np.ndarray | None = None) -> SpinorMode:
    """Apply the operator to one mode.

    Radial derivatives default to the grid's spectral differentiation
    matrix; callers that know the derivatives in closed form (the inverse
    does, via recurrence identities) may pass them in, which is what makes
    composition checks exact rather than quadrature-limited.
    """
    m, n, r = mode.m, mode.n, grid.nodes
    fp = grid.diff @ mode.f if f_prime is None else f_prime
    gp = grid.diff @ mode.g if g_prime is None else g_prime
    p = m * mode.f + gp - (n / r) * mode.g
    q = -m * mode.g - fp - ((n + 1) / r) * mode.f
    return SpinorMode(m=m, n=n, f=p, g=q)


def apply_dirac(fld: SpinorField) -> SpinorField:
    """Apply the operator mode by mode (spectral derivative path)."""
    out = {k: apply_dirac_mode(md, fld.grid) for k, md in fld.modes.items()}
    return SpinorField(fld.grid, fld.m_max, fld.n_max, out)


@lru_cache(maxsize=512)
def _boundary_ladder(nmax: int, s: float) -> bessel.BesselLadder:
    """Scaled ladder at the single point t = s (mode sweeps hammer this)."""
    return bessel.scaled_ladders(nmax, s)


def _bessel_profiles(m: int, n: int, radii: np.ndarray):
    """(I_n, I_{n+1}, K_n, K_{n+1}) at |m| * radii, unscaled doubles."""
    s = abs(m)
    t = s * radii
    nmax = max(abs(n), abs(n + 1))
    lad = bessel.scaled_ladders(nmax, t)
    e_pos = np.exp(t)
    e_neg = np.exp(-t)
    i_n = lad.i_scaled(abs(n)) * e_pos
    i_n1 = lad.i_scaled(abs(n + 1)) * e_pos
    with np.errstate(over="ignore"):
        k_n = lad.k_scaled(abs(n)) * e_neg
        k_n1 = lad.k_scaled(abs(n + 1)) * e_neg
    return i_n, i_n1, k_n, k_n1


def homogeneous_solution(m: int, n: int, grid: RadialGrid,
                         a: complex = 1.0, b: complex = 0.0) -> SpinorMode:
    """The general kernel element of the operator on mode (m, n).

    For m != 0, ``a`` weights the axis-regular branch (I profiles) and
    ``b`` the decaying-at-infinity branch (K profiles):

        f = (m/|m|) (-a I_{n+1}(|m| r) + b K_{n+1}(|m| r))
        g =          a I_n(|m| r)     + b K_n(|m| r)

    For m = 0 the pair decouples into pure powers f = a r^{-(n+1)},
    g = b r^n (which branch is regular then depends on the sign of n).
    Values outside double range collapse to inf; the verification sweeps
    stay well inside it.
    """
    r = grid.nodes
    if m == 0:
        f = a * r ** (-(n + 1.0))
        g = b * r ** float(n)
    else:
        sgn = 1.0 if m > 0 else -1.0
        i_n, i_n1, k_n, k_n1 = _bessel_profiles(m, n, r)
        f = sgn * (-a * i_n1 + b * k_n1)
        g = a * i_n + b * k_n
    return SpinorMode(m=m, n=n, f=np.asarray(f, dtype=complex),
                      g=np.asarray(g, dtype=complex))


def regular_unit_solution(m: int, n: int, grid: RadialGrid) -> SpinorMode:
    """The axis-regular kernel element normalised to functional value 1."""
    if m != 0:
        return homogeneous_solution(m, n, grid, a=1.0, b=0.0)
    if n >= 0:
        return homogeneous_solution(m, n, grid, a=0.0, b=1.0)
    return homogeneous_solution(m, n, grid, a=1.0, b=0.0)


def boundary_functional(mode: SpinorMode) -> complex:
    """The admissibility functional built from boundary traces.

    For m != 0 it is ``|m| K_{n+1}(|m|) g(1) - m K_n(|m|) f(1)``,
    evaluated through exponentially scaled K values so the Wronskian
    cancellation survives at large |m|.  For m = 0 exactly one trace is
    constrained: g(1) when n >= 0, f(1) when n < 0 (the other component's
    regular branch carries no boundary freedom there).
    """
    m, n = mode.m, mode.n
    f1, g1 = mode.boundary_f(), mode.boundary_g()
    if m == 0:
        return g1 if n >= 0 else f1
    s = abs(m)
    lad = _boundary_ladder(max(abs(n), abs(n + 1)), float(s))
    k_n = lad.k_scaled(abs(n))[0]
    k_n1 = lad.k_scaled(abs(n + 1))[0]
    return math.exp(-s) * (s * k_n1 * g1 - m * k_n * f1)


def exterior_coefficients(mode: SpinorMode) -> tuple[complex, complex]:
    """Kernel-branch coefficients (a, b) reproducing the mode's traces.

    The pair solves the 2x2 boundary system; by the Wronskian identity it
    evaluates in closed form with no solve:

        a = |m| K_{n+1}(|m|) g(1) - m K_n(|m|) f(1)   (= the functional)
        b = |m| I_{n+1}(|m|) g(1) + m I_n(|m|) f(1)

    For m = 0 simply a = f(1), b = g(1).

    Conditioning caveat: when one branch dominates the traces by many
    orders (large-order K at small |m|), the minority coefficient is
    recovered only to the cancellation level the traces themselves allow.
    """
    m, n = mode.m, mode.n
    f1, g1 = mode.boundary_f(), mode.boundary_g()
    if m == 0:
        return f1, g1
    s = abs(m)
    nmax = max(abs(n), abs(n + 1))
    lad = _boundary_ladder(nmax, float(s))
    e_neg, e_pos = math.exp(-s), math.exp(s)
    k_n = lad.k_scaled(abs(n))[0] * e_neg
    k_n1 = lad.k_scaled(abs(n + 1))[0] * e_neg
    i_n = lad.i_scaled(abs(n))[0] * e_pos
    i_n1 = lad.i_scaled(abs(n + 1))[0] * e_pos
    a = s * k_n1 * g1 - m * k_n * f1
    b = s * i_n1 * g1 + m * i_n * f1
    return a, b


def evaluate_exterior(m: int, n: int, a: complex, b: complex, radii):
    """Evaluate the kernel element with coefficients (a, b) at radii >= 1.

    Returns the pair of profile arrays (f, g).  This is the exterior
    extension matching :func:`exterior_coefficients`.
    """
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if np.any(radii < 1.0):
        raise DomainError("exterior evaluation needs radii >= 1")
    if m == 0:
        return a * radii ** (-(n + 1.0)), b * radii ** float(n)
    sgn = 1.0 if m > 0 else -1.0
    i_n, i_n1, k_n, k_n1 = _bessel_profiles(m, n, radii)
    return sgn * (-a * i_n1 + b * k_n1), a * i_n + b * k_n


def inner_product(x: SpinorField, y: SpinorField) -> complex:
    """Mode-summed L2 pairing with r dr, conjugating the first argument."""
    mu = x.grid.measure
    total = 0.0 + 0.0j
    for key in sorted(set(x.modes) & set(y.modes)):
        a, c = x.modes[key], y.modes[key]
        total += complex(np.sum((np.conj(a.f) * c.f + np.conj(a.g) * c.g) * mu))
    return total


def greens_boundary_pairing(x: SpinorField, y: SpinorField) -> complex:
    """The boundary term of the integration-by-parts identity:

        <Op x, y> - <x, Op y> = sum over modes of
            conj(g_x(1)) f_y(1) - conj(f_x(1)) g_y(1)

    It vanishes identically when both fields satisfy the admissibility
    constraint (:func:`boundary_functional` zero mode by mode).
    """
    total = 0.0 + 0.0j
    for key in sorted(set(x.modes) & set(y.modes)):
        a, c = x.modes[key], y.modes[key]
        total += (np.conj(a.boundary_g()) * c.boundary_f()
                  - np.conj(a.boundary_f()) * c.boundary_g())
    return complex(total)


@lru_cache(maxsize=4096)
def _regular_unit_cached(m: int, n: int, node_count: int) -> SpinorMode:
    return regular_unit_solution(m, n, make_radial_grid(node_count))


def project_to_domain(mode: SpinorMode, grid: RadialGrid) -> SpinorMode:
    """Subtract the functional's worth of the regular kernel element, so
    the result satisfies the boundary constraint (functional ~ 0 up to
    Wronskian roundoff)."""
    beta = boundary_functional(mode)
    if grid is make_radial_grid(grid.node_count):
        unit = _regular_unit_cached(mode.m, mode.n, grid.node_count)
    else:
        unit = regular_unit_solution(mode.m, mode.n, grid)
    return SpinorMode(m=mode.m, n=mode.n,
                      f=mode.f - beta * unit.f,
                      g=mode.g - beta * unit.g)


def project_field_to_domain(fld: SpinorField) -> SpinorField:
    out = {k: project_to_domain(md, fld.grid) for k, md in fld.modes.items()}
    return SpinorField(fld.grid, fld.m_max, fld.n_max, out)
