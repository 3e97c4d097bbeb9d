"""Modified Bessel functions of integer order, with overflow-safe scaling.

The rest of the package consumes the exponentially scaled variants
``e^{-t} I_n(t)`` and ``e^{t} K_n(t)``; kernel products ``I_a(x) K_b(y)``
with ``x <= y`` then carry a combined exponent ``x - y <= 0`` and never
overflow.  Because the order-driven growth of ``K`` (and decay of ``I``)
at small argument can still leave the range of a double, every internal
value is held as a ``(mantissa, base-2 exponent)`` pair; exponents are
combined exactly and exponentiated once at the end.

Evaluation strategy:

* ``e^{-t} I_0`` — power series for ``t <= 30`` (all-positive terms),
  asymptotic expansion beyond (optimal truncation error is far below
  double precision there).
* ``I_n`` ladders — downward (Miller) recurrence, normalised against the
  order-0 value above; downward recurrence is the stable direction for I.
  A direct asymptotic branch avoids million-step recurrences at huge t.
* ``e^{t} K_0, K_1`` — small-t log series for ``t <= 2``, otherwise the
  trapezoid rule applied to ``e^t K_n(t) = \\int_0^\\infty
  e^{-t(cosh a - 1)} cosh(n a) da`` (geometric convergence in the step).
* ``K_n`` ladders — upward recurrence, the stable direction for K.

Orders are capped at 1024 and arguments at 1e6; beyond that a
:class:`RangeCapError` is raised rather than silently degrading.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RangeCapError

ORDER_CAP = 1024
ARG_CAP = 1.0e6

#: Euler-Mascheroni constant, double precision.
EULER_GAMMA = 0.5772156649015328606

# High/low split of ln 2 (the classic exp range-reduction pair): the high
# part has enough trailing zero bits that k * _LN2_HI is exact for the
# integer sizes that occur here, keeping e^{±t} splits accurate to ~1 ulp
# even for t ~ 1e6.
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_INV_LN2 = 1.4426950408889634074

_I_SERIES_T_MAX = 30.0  # power-series / Miller hand-off for the I chain
_K_SERIES_T_MAX = 2.0   # log-series / quadrature hand-off for K0, K1


def gamma_int(n: int) -> int:
    """Gamma(n) = (n-1)! for positive integer n."""
    if n < 1:
        raise DomainError(f"gamma_int needs n >= 1, got {n}")
    return math.factorial(n - 1)


# ---------------------------------------------------------------------------
# (mantissa, exponent) helpers.  value = mant * 2**exp, elementwise arrays.
# ---------------------------------------------------------------------------

def _norm(mant, exp):
    m, e = np.frexp(mant)
    return m, exp + e


def _mul(am, ae, bm, be):
    return _norm(am * bm, ae + be)


def _add(am, ae, bm, be):
    top = np.maximum(ae, be)
    m = np.ldexp(am, (ae - top).astype(np.int64)) + np.ldexp(bm, (be - top).astype(np.int64))
    return _norm(m, top)


def _exp_split(x):
    """e^x as a (mantissa, exponent) pair, valid for |x| up to ~1e8."""
    x = np.asarray(x, dtype=float)
    k = np.rint(x * _INV_LN2)
    r = (x - k * _LN2_HI) - k * _LN2_LO
    return _norm(np.exp(r), k.astype(np.int64))


def _to_float(mant, exp):
    """Collapse a pair to a double; overflow becomes inf, underflow 0."""
    with np.errstate(over="ignore", under="ignore"):
        return np.ldexp(mant, np.clip(exp, -1490, 1490).astype(np.int64))


# ---------------------------------------------------------------------------
# Scalar/array plumbing and argument validation.
# ---------------------------------------------------------------------------

def _check_order(n: int) -> int:
    n = int(n)
    n = abs(n)  # I_{-n} = I_n, K_{-n} = K_n for integer order
    if n > ORDER_CAP:
        raise RangeCapError(f"order |n|={n} exceeds cap {ORDER_CAP}")
    return n


def _check_arg(t, allow_zero=False):
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise DomainError("argument t must be finite")
    if allow_zero:
        if np.any(t < 0.0):
            raise DomainError("argument t must be >= 0")
    else:
        if np.any(t <= 0.0):
            raise DomainError("argument t must be > 0")
    if np.any(t > ARG_CAP):
        raise RangeCapError(f"argument exceeds cap {ARG_CAP:g}")
    return t


# ---------------------------------------------------------------------------
# Order-0/1 anchors.
# ---------------------------------------------------------------------------

def _i0_scaled(t):
    """e^{-t} I_0(t) for a 1-D positive array; plain doubles (value <= 1)."""
    out = np.empty_like(t)
    small = t <= _I_SERIES_T_MAX
    if np.any(small):
        ts = t[small]
        q = 0.25 * ts * ts
        term = np.ones_like(ts)
        acc = np.ones_like(ts)
        for k in range(1, 200):
            term = term * q / (k * k)
            acc += term
            if np.all(term <= 1e-17 * acc):
                break
        out[small] = np.exp(-ts) * acc
    big = ~small
    if np.any(big):
        tb = t[big]
        term = np.ones_like(tb)
        acc = np.ones_like(tb)
        # e^{-t} I_0(t) ~ (2 pi t)^{-1/2} (1 + 1/(8t) + 9/(128 t^2) + ...)
        for k in range(1, 40):
            term = term * ((2 * k - 1) ** 2) / (8.0 * k * tb)
            acc += term
            if np.all(term <= 1e-17 * acc):
                break
        out[big] = acc / np.sqrt(2.0 * math.pi * tb)
    return out


def _k01_series(t):
    """(K_0(t), K_1(t)) unscaled, small-t log series; t <= 2."""
    q = 0.25 * t * t
    lg = np.log(0.5 * t)
    # I_0 and I_1 by series (they appear inside the K series).
    term = np.ones_like(t)
    i0 = np.ones_like(t)
    for k in range(1, 60):
        term = term * q / (k * k)
        i0 += term
        if np.all(term <= 1e-18 * i0):
            break
    term = np.ones_like(t)
    s1 = np.ones_like(t)
    for k in range(1, 60):
        term = term * q / (k * (k + 1))
        s1 += term
        if np.all(term <= 1e-18 * s1):
            break
    i1 = 0.5 * t * s1

    # K_0 = -(ln(t/2) + gamma) I_0 + sum_{k>=1} H_k q^k / (k!)^2
    term = np.ones_like(t)
    acc0 = np.zeros_like(t)
    h = 0.0
    for k in range(1, 60):
        term = term * q / (k * k)
        h += 1.0 / k
        acc0 += term * h
        if np.all(term * h <= 1e-18 * (np.abs(acc0) + 1.0)):
            break
    k0 = -(lg + EULER_GAMMA) * i0 + acc0

    # K_1 = 1/t + ln(t/2) I_1 - (t/4) sum_k (H_k + H_{k+1} - 2 gamma) q^k / (k!(k+1)!)
    term = np.ones_like(t)
    hk = 0.0
    hk1 = 1.0
    acc1 = (hk + hk1 - 2.0 * EULER_GAMMA) * term
    for k in range(1, 60):
        term = term * q / (k * (k + 1))
        hk += 1.0 / k
        hk1 += 1.0 / (k + 1)
        c = hk + hk1 - 2.0 * EULER_GAMMA
        acc1 += c * term
        if np.all(np.abs(term * c) <= 1e-18 * (np.abs(acc1) + 1.0)):
            break
    k1 = 1.0 / t + lg * i1 - 0.25 * t * acc1
    return k0, k1


_QUAD_U = np.arange(0.0, 7.5, 1.0 / 16.0)


def _k01_quad_scaled(t):
    """(e^t K_0, e^t K_1) by trapezoid on the cosh integral; t > 2."""
    beta = np.sqrt(2.0 / t)[:, None]
    a = beta * _QUAD_U[None, :]
    sh = np.sinh(0.5 * a)
    w = np.exp(-t[:, None] * (2.0 * sh * sh))  # cosh(a) - 1, cancellation-free
    w[:, 0] *= 0.5
    h = (_QUAD_U[1] - _QUAD_U[0])
    k0 = h * np.sum(w, axis=1) * beta[:, 0]
    k1 = h * np.sum(w * np.cosh(a), axis=1) * beta[:, 0]
    return k0, k1


def _k01_scaled(t):
    """(e^t K_0(t), e^t K_1(t)) as plain doubles for a 1-D positive array."""
    k0 = np.empty_like(t)
    k1 = np.empty_like(t)
    small = t <= _K_SERIES_T_MAX
    if np.any(small):
        ts = t[small]
        a, b = _k01_series(ts)
        s = np.exp(ts)
        k0[small] = a * s
        k1[small] = b * s
    big = ~small
    if np.any(big):
        a, b = _k01_quad_scaled(t[big])
        k0[big] = a
        k1[big] = b
    return k0, k1


# ---------------------------------------------------------------------------
# Ladders over orders 0..nmax at a batch of arguments.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BesselLadder:
    """Scaled I/K values for all orders ``0..nmax`` at a batch of arguments.

    ``i_mant * 2**i_exp = e^{-t} I_n(t)`` and ``k_mant * 2**k_exp =
    e^{t} K_n(t)``; arrays are indexed ``[order, point]``.
    """

    t: np.ndarray
    i_mant: np.ndarray
    i_exp: np.ndarray
    k_mant: np.ndarray
    k_exp: np.ndarray

    @property
    def nmax(self) -> int:
        return self.i_mant.shape[0] - 1

    def i_scaled(self, n: int) -> np.ndarray:
        """e^{-t} I_n(t) as doubles (always <= 1, may underflow to 0)."""
        return _to_float(self.i_mant[n], self.i_exp[n])

    def k_scaled(self, n: int) -> np.ndarray:
        """e^{t} K_n(t) as doubles (may overflow to inf at tiny t, large n)."""
        return _to_float(self.k_mant[n], self.k_exp[n])

    def ik_product(self, n_i: int, idx_i, n_k: int, idx_k) -> np.ndarray:
        """I_{n_i}(t[idx_i]) * K_{n_k}(t[idx_k]) with exponents combined first.

        ``idx_i`` / ``idx_k`` may be any broadcast-compatible index arrays;
        the result is exact scaled arithmetic, finite whenever the true
        product is in double range.
        """
        em, ee = _exp_split(self.t[idx_i] - self.t[idx_k])
        m, e = _mul(self.i_mant[n_i][idx_i], self.i_exp[n_i][idx_i],
                    self.k_mant[n_k][idx_k], self.k_exp[n_k][idx_k])
        m, e = _mul(m, e, em, ee)
        return _to_float(m, e)


def _i_ladder_miller(nmax, t):
    """Scaled I ladder by downward recurrence; t a positive 1-D array.

    The iterate pair is carried as plain doubles against a shared running
    base-2 exponent, renormalised every few steps (growth per step is
    bounded by ~2k/t, so a short burst cannot overflow).
    """
    npts = t.size
    start = int(max(nmax, math.ceil(2.0 * float(np.max(t))))) + 60
    inv_t = 1.0 / t
    stride = 4 if float(np.min(t)) >= 1e-6 else 1
    hi = np.zeros(npts)      # order k+1, times 2**base
    lo = np.full(npts, 1.0)  # order k, times 2**base
    base = np.zeros(npts, dtype=np.int64)
    im = np.empty((nmax + 1, npts))
    ie = np.empty((nmax + 1, npts), dtype=np.int64)
    for k in range(start, 0, -1):
        if k <= nmax:
            im[k] = lo
            ie[k] = base
        hi, lo = lo, hi + (2.0 * k) * inv_t * lo
        if k % stride == 0:
            m, e = np.frexp(lo)
            lo = m
            hi = np.ldexp(hi, -e)
            base = base + e
    im[0] = lo
    ie[0] = base
    im, ie = _norm(im, ie)
    # Normalise so order 0 equals the directly computed e^{-t} I_0.
    a0m, a0e = _norm(_i0_scaled(t), np.zeros(npts, dtype=np.int64))
    with np.errstate(divide="ignore", invalid="ignore"):
        sm, se = _norm(a0m / im[0], a0e - ie[0])
    return _mul(im, ie, sm[None, :], se[None, :])


def _i_ladder_asym(nmax, t):
    """Scaled I ladder by per-order asymptotic expansion; t large."""
    npts = t.size
    pref = 1.0 / np.sqrt(2.0 * math.pi * t)
    im = np.empty((nmax + 1, npts))
    ie = np.zeros((nmax + 1, npts), dtype=np.int64)
    for n in range(nmax + 1):
        mu = 4.0 * n * n
        term = np.ones_like(t)
        acc = np.ones_like(t)
        for k in range(0, 40):
            nxt = term * (((2 * k + 1) ** 2 - mu) / (8.0 * (k + 1))) / t
            if np.all(np.abs(nxt) >= np.abs(term)) and k > 0:
                break
            term = nxt
            acc += term
            if np.all(np.abs(term) <= 1e-17 * np.abs(acc)):
                break
        im[n], ie[n] = _norm(pref * acc, np.zeros(npts, dtype=np.int64))
    return im, ie


def scaled_ladders(nmax: int, t, need_k: bool = True) -> BesselLadder:
    """Build scaled I (and optionally K) ladders for orders 0..nmax.

    ``t`` may be a scalar or 1-D array of positive arguments within the
    caps.  This is the workhorse entry point for kernel assembly: one
    downward/upward pass serves every order at every point.
    """
    if nmax < 0:
        raise DomainError("nmax must be >= 0")
    if nmax > ORDER_CAP:
        raise RangeCapError(f"order cap exceeded: {nmax} > {ORDER_CAP}")
    t = np.atleast_1d(_check_arg(t)).astype(float)
    nl = max(nmax, 1)
    # I chain: asymptotic fast path when every argument is large relative
    # to the top order, Miller recurrence otherwise (possibly split).
    t_min = float(np.min(t))
    use_asym = (t_min >= 400.0) and (nl * nl <= 0.25 * t_min)
    if use_asym:
        im, ie = _i_ladder_asym(nl, t)
    elif float(np.max(t)) >= 400.0 and (nl * nl <= 0.25 * 400.0):
        big = t >= 400.0
        im = np.empty((nl + 1, t.size))
        ie = np.empty((nl + 1, t.size), dtype=np.int64)
        bm, be = _i_ladder_asym(nl, t[big])
        sm, se = _i_ladder_miller(nl, t[~big])
        im[:, big], ie[:, big] = bm, be
        im[:, ~big], ie[:, ~big] = sm, se
    else:
        im, ie = _i_ladder_miller(nl, t)

    if need_k:
        k0, k1 = _k01_scaled(t)
        km = np.empty_like(im)
        ke = np.empty_like(ie)
        km[0], ke[0] = _norm(k0, np.zeros(t.size, dtype=np.int64))
        if nl >= 1:
            km[1], ke[1] = _norm(k1, np.zeros(t.size, dtype=np.int64))
        inv_t = 1.0 / t
        for n in range(1, nl):
            cm, ce = _norm((2.0 * n) * inv_t, np.zeros(t.size, dtype=np.int64))
            pm, pe = _mul(cm, ce, km[n], ke[n])
            km[n + 1], ke[n + 1] = _add(pm, pe, km[n - 1], ke[n - 1])
    else:
        km = np.zeros_like(im)
        ke = np.zeros_like(ie)
    return BesselLadder(t=t, i_mant=im, i_exp=ie, k_mant=km, k_exp=ke)


# ---------------------------------------------------------------------------
# Public point evaluation.
# ---------------------------------------------------------------------------

def _shape_out(value, t_in):
    if np.isscalar(t_in) or getattr(t_in, "ndim", 1) == 0:
        return float(value[0])
    return value


def bessel_i_scaled(n: int, t):
    """e^{-t} I_n(t); scalar or array t, t = 0 allowed."""
    n = _check_order(n)
    t_arr = np.atleast_1d(_check_arg(t, allow_zero=True)).astype(float)
    out = np.empty_like(t_arr)
    zero = t_arr == 0.0
    out[zero] = 1.0 if n == 0 else 0.0
    if np.any(~zero):
        lad = scaled_ladders(n, t_arr[~zero], need_k=False)
        out[~zero] = lad.i_scaled(n)
    return _shape_out(out, t)


def bessel_k_scaled(n: int, t):
    """e^{t} K_n(t); scalar or array t > 0.  May overflow to inf for
    large order at tiny argument (use :func:`scaled_pair` there)."""
    n = _check_order(n)
    t_arr = np.atleast_1d(_check_arg(t)).astype(float)
    lad = scaled_ladders(n, t_arr)
    return _shape_out(lad.k_scaled(n), t)


def bessel_i(n: int, t):
    """I_n(t) unscaled.  Overflows to inf past t ~ 709 + log-range."""
    n = _check_order(n)
    t_arr = np.atleast_1d(_check_arg(t, allow_zero=True)).astype(float)
    out = np.empty_like(t_arr)
    zero = t_arr == 0.0
    out[zero] = 1.0 if n == 0 else 0.0
    if np.any(~zero):
        tz = t_arr[~zero]
        lad = scaled_ladders(n, tz, need_k=False)
        em, ee = _exp_split(tz)
        m, e = _mul(lad.i_mant[n], lad.i_exp[n], em, ee)
        out[~zero] = _to_float(m, e)
    return _shape_out(out, t)


def bessel_k(n: int, t):
    """K_n(t) unscaled; inf when the true value exceeds double range."""
    n = _check_order(n)
    t_arr = np.atleast_1d(_check_arg(t)).astype(float)
    lad = scaled_ladders(n, t_arr)
    em, ee = _exp_split(-t_arr)
    m, e = _mul(lad.k_mant[n], lad.k_exp[n], em, ee)
    return _shape_out(_to_float(m, e), t)


def bessel_i_deriv(n: int, t):
    """I_n'(t) via I_n' = I_{n+1} + (n/t) I_n."""
    n = _check_order(n)
    t_arr = np.atleast_1d(_check_arg(t)).astype(float)
    lad = scaled_ladders(n + 1, t_arr, need_k=False)
    em, ee = _exp_split(t_arr)
    am, ae = _mul(lad.i_mant[n + 1], lad.i_exp[n + 1], em, ee)
    cm, ce = _norm(n / t_arr, np.zeros(t_arr.size, dtype=np.int64))
    bm, be = _mul(lad.i_mant[n], lad.i_exp[n], em, ee)
    bm, be = _mul(bm, be, cm, ce)
    m, e = _add(am, ae, bm, be)
    return _shape_out(_to_float(m, e), t)


def bessel_k_deriv(n: int, t):
    """K_n'(t) via K_n' = -K_{n+1} + (n/t) K_n (always negative)."""
    n = _check_order(n)
    t_arr = np.atleast_1d(_check_arg(t)).astype(float)
    lad = scaled_ladders(n + 1, t_arr)
    em, ee = _exp_split(-t_arr)
    am, ae = _mul(-lad.k_mant[n + 1], lad.k_exp[n + 1], em, ee)
    cm, ce = _norm(n / t_arr, np.zeros(t_arr.size, dtype=np.int64))
    bm, be = _mul(lad.k_mant[n], lad.k_exp[n], em, ee)
    bm, be = _mul(bm, be, cm, ce)
    m, e = _add(am, ae, bm, be)
    return _shape_out(_to_float(m, e), t)


@dataclass(frozen=True)
class ScaledBesselPair:
    """Exponentially scaled I/K values at one (n, t), plus a shared exponent.

    ``e^{-t} I_n(t) = i_scaled * 2**exponent`` and ``e^{t} K_n(t) =
    k_scaled * 2**(-exponent)``.  Both stored mantissa-like fields stay
    O(1)-ish even where the scaled values themselves leave double range,
    so kernel products can always be formed exponent-first.
    """

    n: int
    t: float
    i_scaled: float
    k_scaled: float
    exponent: int

    def i_value_scaled(self) -> float:
        """e^{-t} I_n(t) as a double (may underflow to 0)."""
        return float(_to_float(np.asarray(self.i_scaled), np.asarray(self.exponent)))

    def k_value_scaled(self) -> float:
        """e^{t} K_n(t) as a double (may overflow to inf)."""
        return float(_to_float(np.asarray(self.k_scaled), np.asarray(-self.exponent)))

    def ik(self) -> float:
        """The overflow-free product I_n(t) K_n(t)."""
        return self.i_scaled * self.k_scaled


def scaled_pair(n: int, t: float) -> ScaledBesselPair:
    """Jointly scaled (I_n, K_n) at one argument; see :class:`ScaledBesselPair`."""
    n = _check_order(n)
    t_arr = np.atleast_1d(_check_arg(t)).astype(float)
    lad = scaled_ladders(n, t_arr)
    ie = int(lad.i_exp[n][0])
    km, ke = _mul(lad.k_mant[n], lad.k_exp[n], np.ones(1), np.full(1, ie, dtype=np.int64))
    return ScaledBesselPair(
        n=n,
        t=float(t_arr[0]),
        i_scaled=float(lad.i_mant[n][0]),
        k_scaled=float(_to_float(km, ke)[0]),
        exponent=ie,
    )


def ik_product(n_i: int, t, n_k: int, s):
    """I_{n_i}(t) * K_{n_k}(s) with exponents combined before exponentiation.

    Finite whenever the true product is representable, for any order and
    argument within the caps (the usual kernel case t <= s has combined
    exponent t - s <= 0).
    """
    n_i = _check_order(n_i)
    n_k = _check_order(n_k)
    t_arr = np.atleast_1d(_check_arg(t)).astype(float)
    s_arr = np.atleast_1d(_check_arg(s)).astype(float)
    t_b, s_b = np.broadcast_arrays(t_arr, s_arr)
    li = scaled_ladders(n_i, t_b.ravel(), need_k=False)
    lk = scaled_ladders(n_k, s_b.ravel())
    em, ee = _exp_split(t_b.ravel() - s_b.ravel())
    m, e = _mul(li.i_mant[n_i], li.i_exp[n_i], lk.k_mant[n_k], lk.k_exp[n_k])
    m, e = _mul(m, e, em, ee)
    out = _to_float(m, e).reshape(t_b.shape)
    if np.isscalar(t) and np.isscalar(s):
        return float(out.ravel()[0])
    return out


def wronskian_residual(n, t):
    """| t * (I_n K_{n+1} + I_{n+1} K_n) - 1 |, scaled so the e^{±t}
    factors cancel exactly; the exact value of the bracket is 1/t.

    ``n`` may be a single order or a sequence of orders; a sequence shares
    one recurrence ladder, which is much faster for full-order sweeps.
    The result has shape ``(len(n), len(t))`` for sequence input.
    """
    single = np.isscalar(n)
    orders = [_check_order(v) for v in ([n] if single else n)]
    top = max(orders) + 1
    if top > ORDER_CAP:
        raise RangeCapError(f"order cap exceeded: need order {top}")
    t_arr = np.atleast_1d(_check_arg(t)).astype(float)
    lad = scaled_ladders(top, t_arr)
    rows = []
    for v in orders:
        am, ae = _mul(lad.i_mant[v], lad.i_exp[v], lad.k_mant[v + 1], lad.k_exp[v + 1])
        bm, be = _mul(lad.i_mant[v + 1], lad.i_exp[v + 1], lad.k_mant[v], lad.k_exp[v])
        m, e = _add(am, ae, bm, be)
        m, e = _mul(m, e, *_norm(t_arr, np.zeros(t_arr.size, dtype=np.int64)))
        rows.append(np.abs(_to_float(m, e) - 1.0))
    if single:
        return _shape_out(rows[0], t)
    return np.stack(rows)


# ---------------------------------------------------------------------------
# Identity / inequality verification sweep.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    check: str
    n: int
    t: float
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of :func:`inequality_suite`: one record per violated point."""

    n_max: int
    grid_size: int
    checks_run: int
    violations: tuple

    @property
    def passed(self) -> bool:
        return len(self.violations) == 0


def _collect(violations, name, n, t, lhs, rhs, tol):
    """Record points where rhs - lhs dips below -tol relative to scale."""
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), 1.0)
    bad = (rhs - lhs) < -tol * scale
    for idx in np.nonzero(bad)[0]:
        violations.append(Violation(name, int(n), float(t[idx]),
                                    float(lhs[idx]), float(rhs[idx])))
    return lhs.size


def inequality_suite(n_max: int, t_grid, slack_tol: float = 1e-12,
                     k_scale: float = 1.0) -> InequalityReport:
    """Check the full monotonicity/product/log-derivative inequality set
    plus near-zero and large-argument asymptotic ratios on a t-grid.

    ``slack_tol`` is the allowed relative undershoot.  ``k_scale`` is a
    fault-injection hook used by the CLI's self-test: it multiplies every
    K value by the given factor, which must break the cross bounds.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    t = np.sort(np.atleast_1d(_check_arg(t_grid)).astype(float))
    lad = scaled_ladders(n_max + 1, t)
    i_s = np.stack([lad.i_scaled(n) for n in range(n_max + 2)])
    k_s = np.stack([lad.k_scaled(n) for n in range(n_max + 2)]) * k_scale
    # products I_n K_m with the e^{±t} factors cancelling structurally
    def prod(n_i, n_k):
        m, e = _mul(lad.i_mant[n_i], lad.i_exp[n_i], lad.k_mant[n_k], lad.k_exp[n_k])
        return _to_float(m, e) * k_scale

    violations: list = []
    checks = 0
    for n in range(n_max + 1):
        # order monotonicity
        checks += _collect(violations, "i_order_monotone", n, t,
                           i_s[n + 1], i_s[n], slack_tol)
        checks += _collect(violations, "k_order_monotone", n, t,
                           k_s[n], k_s[n + 1], slack_tol)
        # K_n I_n decreasing in t along the grid
        p = prod(n, n)
        checks += _collect(violations, "ki_product_decreasing", n, t[1:],
                           p[1:], p[:-1], slack_tol)
        if n >= 1:
            checks += _collect(violations, "ki_product_bound", n, t,
                               p, np.full_like(p, 1.0 / (2.0 * n)), slack_tol)
        # t K_n I_n <= t K_{n+1} I_n <= 1
        cross = t * prod(n, n + 1)
        checks += _collect(violations, "t_ki_cross_monotone", n, t,
                           t * p, cross, slack_tol)
        checks += _collect(violations, "t_ki_cross_bound", n, t,
                           cross, np.ones_like(cross), slack_tol)
        if n >= 1:
            # I_n <= (t/n) I_n'  ==  n I_n <= t I_n' = t I_{n+1} + n I_n
            lhs = n * i_s[n]
            rhs = t * i_s[n + 1] + n * i_s[n]
            checks += _collect(violations, "i_log_derivative_tn", n, t, lhs, rhs, slack_tol)
            # I_n <= 2 I_n' = 2 I_{n+1} + (2n/t) I_n
            checks += _collect(violations, "i_log_derivative_2", n, t,
                               i_s[n], 2.0 * i_s[n + 1] + (2.0 * n / t) * i_s[n], slack_tol)
            # K_n <= -(t/n) K_n' = (t/n) K_{n-1} + K_n  (second recurrence form)
            checks += _collect(violations, "k_log_derivative_tn", n, t,
                               k_s[n], (t / n) * k_s[n - 1] + k_s[n], slack_tol)
        # K_n <= -2 K_n' = K_{n+1} + K_{n-1}
        below = k_s[n - 1] if n >= 1 else k_s[1]  # K_{-1} = K_1
        checks += _collect(violations, "k_log_derivative_2", n, t,
                           k_s[n], k_s[n + 1] + below, slack_tol)

    # asymptotic ratio spot checks at the grid ends
    t0, t1 = float(t[0]), float(t[-1])
    if t0 <= 0.01:
        for n in range(n_max + 1):
            # I_n(t) / [(t/2)^n / n!] -> 1
            ln_i = math.log(lad.i_mant[n][0]) + lad.i_exp[n][0] * math.log(2.0) + t0
            ln_ref = n * math.log(0.5 * t0) - math.lgamma(n + 1)
            ratio = math.exp(ln_i - ln_ref)
            checks += _collect(violations, "i_ratio_near_zero", n, np.array([t0]),
                               np.array([abs(ratio - 1.0)]), np.array([0.01]), 0.0)
            # K_n near zero: K_0 ~ -ln(t/2) - gamma, K_n ~ (Gamma(n)/2)(2/t)^n
            ln_k = math.log(lad.k_mant[n][0]) + lad.k_exp[n][0] * math.log(2.0) - t0
            if n == 0:
                ln_ref = math.log(-math.log(0.5 * t0) - EULER_GAMMA)
            else:
                ln_ref = math.lgamma(n) - math.log(2.0) + n * math.log(2.0 / t0)
            ratio = math.exp(ln_k + math.log(k_scale) - ln_ref) * 1.0
            checks += _collect(violations, "k_ratio_near_zero", n, np.array([t0]),
                               np.array([abs(ratio - 1.0)]), np.array([0.01]), 0.0)
    if t1 >= 50.0:
        for n in range(n_max + 1):
            if (4.0 * n * n + 3.0) / (8.0 * t1) > 0.005:
                continue
            ratio_i = lad.i_scaled(n)[-1] * math.sqrt(2.0 * math.pi * t1)
            checks += _collect(violations, "i_ratio_large_t", n, np.array([t1]),
                               np.array([abs(ratio_i - 1.0)]), np.array([0.01]), 0.0)
            ratio_k = k_s[n][-1] / math.sqrt(math.pi / (2.0 * t1))
            checks += _collect(violations, "k_ratio_large_t", n, np.array([t1]),
                               np.array([abs(ratio_k - 1.0)]), np.array([0.01]), 0.0)

    return InequalityReport(n_max=n_max, grid_size=t.size, checks_run=checks,
                            violations=tuple(violations))
