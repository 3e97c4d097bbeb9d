"""Mode-space representation of spinor fields on the solid torus.

A field is a finite family of coupled radial pairs indexed by
``(m, n)``: ``m`` is the frequency around the core circle, and the pair
``(f, g)`` carries adjacent transverse frequencies — ``f`` oscillates as
``e^{i (n+1) phi}`` and ``g`` as ``e^{i n phi}``.  That offset pairing is
what the first-order operator couples, so it is baked into the container
rather than handled at call sites.

Radial profiles live on a right-fixed Gauss-Radau grid on (0, 1]: the
boundary r = 1 is a node (boundary traces are direct reads), r = 0 is
not (coordinate singularities never get evaluated), and quadrature with
the node weights is exact through polynomial degree 2*node_count - 2.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType

import numpy as np
from scipy.special import roots_jacobi

from .errors import AliasingError, ConfigError, DomainError


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RadialGrid:
    """Gauss-Radau nodes/weights on (0, 1] with r = 1 fixed.

    ``weights`` integrate dr; ``measure`` = weights * nodes integrates the
    cylindrical r dr that the field norm uses.  ``diff`` is the spectral
    differentiation matrix on the nodes.
    """

    nodes: np.ndarray
    weights: np.ndarray
    diff: np.ndarray

    @property
    def node_count(self) -> int:
        return self.nodes.size

    @property
    def measure(self) -> np.ndarray:
        return _freeze(self.weights * self.nodes)

    def interpolation_matrix(self, targets: np.ndarray) -> np.ndarray:
        """Rows evaluate the nodal interpolant at ``targets`` (barycentric)."""
        return _bary_matrix(self.nodes, np.asarray(targets, dtype=float))


def _bary_weights(x: np.ndarray) -> np.ndarray:
    # products scaled by the inverse capacity 4/(b-a) to keep them in range
    n = x.size
    cap = 4.0 / (x[-1] - x[0])
    w = np.ones(n)
    for j in range(n):
        w[j] = 1.0 / np.prod((x[j] - np.delete(x, j)) * cap)
    return w


def _bary_matrix(x: np.ndarray, targets: np.ndarray) -> np.ndarray:
    w = _bary_weights(x)
    out = np.empty((targets.size, x.size))
    for i, t in enumerate(targets):
        d = t - x
        hit = np.nonzero(d == 0.0)[0]
        if hit.size:
            row = np.zeros(x.size)
            row[hit[0]] = 1.0
        else:
            row = w / d
            row = row / row.sum()
        out[i] = row
    return out


def make_radial_grid(node_count: int = 64) -> RadialGrid:
    """Build the radial grid; ``node_count`` >= 2, last node exactly 1.

    Grids are immutable, so repeated calls share one cached instance per
    size (cheap identity checks for callers that key work off the grid).
    """
    return _build_radial_grid(int(node_count))


@lru_cache(maxsize=32)
def _build_radial_grid(n: int) -> RadialGrid:
    if n < 2:
        raise DomainError("node_count must be >= 2")
    # Right-fixed Radau on [-1, 1]: interior nodes are the Jacobi(1,0)
    # roots, interior weights lam_i/(1 - x_i), endpoint weight 2/n^2.
    xj, lam = roots_jacobi(n - 1, 1.0, 0.0)
    x = np.concatenate([xj, [1.0]])
    w = np.concatenate([lam / (1.0 - xj), [2.0 / (n * n)]])
    r = 0.5 * (x + 1.0)
    wr = 0.5 * w
    # differentiation matrix via barycentric weights + negative-sum trick
    bw = _bary_weights(r)
    d = np.zeros((n, n))
    for i in range(n):
        off = [j for j in range(n) if j != i]
        d[i, off] = (bw[off] / bw[i]) / (r[i] - r[off])
        d[i, i] = -d[i, off].sum()
    return RadialGrid(nodes=_freeze(r), weights=_freeze(wr), diff=_freeze(d))


@dataclass(frozen=True)
class SpinorMode:
    """One coupled radial pair at frequencies (m; n+1, n).

    ``f`` and ``g`` are complex nodal values on the owning grid; they are
    frozen at construction.
    """

    m: int
    n: int
    f: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        f = np.ascontiguousarray(self.f, dtype=complex)
        g = np.ascontiguousarray(self.g, dtype=complex)
        if f.shape != g.shape or f.ndim != 1:
            raise ConfigError("mode components must be equal-length 1-D arrays")
        object.__setattr__(self, "f", _freeze(f))
        object.__setattr__(self, "g", _freeze(g))

    def norm_sq(self, grid: RadialGrid) -> float:
        mu = grid.measure
        return float(np.sum((np.abs(self.f) ** 2 + np.abs(self.g) ** 2) * mu))

    def boundary_f(self) -> complex:
        """Trace of f at r = 1 (the last grid node)."""
        return complex(self.f[-1])

    def boundary_g(self) -> complex:
        return complex(self.g[-1])


class SpinorField:
    """An immutable collection of modes over one radial grid.

    ``modes`` maps ``(m, n)`` to :class:`SpinorMode`; ``m_max`` / ``n_max``
    record the rectangular truncation the field was built under.
    """

    __slots__ = ("grid", "m_max", "n_max", "modes")

    def __init__(self, grid: RadialGrid, m_max: int, n_max: int, modes):
        if m_max < 0 or n_max < 0:
            raise ConfigError("truncation orders must be >= 0")
        staged = {}
        for key, mode in dict(modes).items():
            m, n = key
            if abs(m) > m_max or abs(n) > n_max:
                raise ConfigError(f"mode {key} outside truncation "
                                  f"(m_max={m_max}, n_max={n_max})")
            if mode.f.size != grid.node_count:
                raise ConfigError("mode length does not match grid")
            if (mode.m, mode.n) != (m, n):
                raise ConfigError(f"mode stored under wrong key {key}")
            staged[(m, n)] = mode
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "m_max", int(m_max))
        object.__setattr__(self, "n_max", int(n_max))
        object.__setattr__(self, "modes", MappingProxyType(staged))

    def __setattr__(self, *_):
        raise AttributeError("SpinorField is immutable")

    def norm(self) -> float:
        return math.sqrt(sum(md.norm_sq(self.grid) for md in self.modes.values()))

    def mode_or_zero(self, m: int, n: int) -> SpinorMode:
        md = self.modes.get((m, n))
        if md is None:
            z = np.zeros(self.grid.node_count, dtype=complex)
            md = SpinorMode(m=m, n=n, f=z, g=z.copy())
        return md


def field_norm(field: SpinorField) -> float:
    """L2 norm with the cylindrical r dr measure, summed over modes."""
    return field.norm()


# ---------------------------------------------------------------------------
# Angular sampling <-> mode coefficients.
# ---------------------------------------------------------------------------

def _check_sampling(n_phi: int, n_theta: int, m_max: int, n_max: int):
    # transverse frequencies present span [-n_max, n_max + 1]: 2*n_max + 2
    # distinct integers; the core circle needs 2*m_max + 1.
    if n_phi < 2 * n_max + 2:
        raise AliasingError(
            f"n_phi={n_phi} cannot resolve transverse frequencies up to "
            f"{n_max + 1}; need at least {2 * n_max + 2}")
    if n_theta < 2 * m_max + 1:
        raise AliasingError(
            f"n_theta={n_theta} cannot resolve core frequencies up to "
            f"{m_max}; need at least {2 * m_max + 1}")


def synthesize(fld: SpinorField, n_phi: int | None = None,
               n_theta: int | None = None) -> np.ndarray:
    """Evaluate a mode collection on an angular product grid.

    Returns samples of shape ``(2, node_count, n_phi, n_theta)``; index 0
    is the f component, index 1 the g component.  Angular grids are the
    uniform points ``2 pi j / L``.
    """
    if n_phi is None:
        n_phi = 2 * fld.n_max + 2
    if n_theta is None:
        n_theta = 2 * fld.m_max + 1
    _check_sampling(n_phi, n_theta, fld.m_max, fld.n_max)
    nr = fld.grid.node_count
    # coefficient tensors indexed by frequency bins
    cf = np.zeros((nr, n_phi, n_theta), dtype=complex)
    cg = np.zeros((nr, n_phi, n_theta), dtype=complex)
    for (m, n), md in sorted(fld.modes.items()):
        cf[:, (n + 1) % n_phi, m % n_theta] += md.f
        cg[:, n % n_phi, m % n_theta] += md.g
    # x_j = sum_nu c_nu e^{+i nu phi_j}: inverse FFT times L
    f_s = np.fft.ifft(np.fft.ifft(cf, axis=1), axis=2) * (n_phi * n_theta)
    g_s = np.fft.ifft(np.fft.ifft(cg, axis=1), axis=2) * (n_phi * n_theta)
    return np.stack([f_s, g_s])


def decompose(samples: np.ndarray, grid: RadialGrid, m_max: int,
              n_max: int) -> SpinorField:
    """Project angular samples onto the truncated mode set.

    ``samples`` must have shape ``(2, node_count, n_phi, n_theta)`` with
    grids fine enough for the truncation (:class:`AliasingError` if not).
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.ndim != 4 or samples.shape[0] != 2:
        raise ConfigError("samples must have shape (2, n_r, n_phi, n_theta)")
    if samples.shape[1] != grid.node_count:
        raise ConfigError("radial sample count does not match grid")
    n_phi, n_theta = samples.shape[2], samples.shape[3]
    _check_sampling(n_phi, n_theta, m_max, n_max)
    cf = np.fft.fft(np.fft.fft(samples[0], axis=1), axis=2) / (n_phi * n_theta)
    cg = np.fft.fft(np.fft.fft(samples[1], axis=1), axis=2) / (n_phi * n_theta)
    modes = {}
    for m in range(-m_max, m_max + 1):
        for n in range(-n_max, n_max + 1):
            f = cf[:, (n + 1) % n_phi, m % n_theta]
            g = cg[:, n % n_phi, m % n_theta]
            if np.any(f != 0.0) or np.any(g != 0.0):
                modes[(m, n)] = SpinorMode(m=m, n=n, f=f.copy(), g=g.copy())
    return SpinorField(grid, m_max, n_max, modes)


def seeded_field(grid: RadialGrid, m_max: int, n_max: int,
                 seed: int = 42) -> SpinorField:
    """A reproducible smooth test field with regular behaviour at the axis.

    Each profile is a low-degree polynomial times ``r^min(|freq|, 3)``, so
    applying the first-order operator never produces a 1/r singularity,
    and coefficients decay quadratically in the mode indices.
    """
    rng = np.random.default_rng(seed)
    r = grid.nodes
    modes = {}
    for m in range(-m_max, m_max + 1):
        for n in range(-n_max, n_max + 1):
            decay = 1.0 / (1.0 + m * m + n * n)
            cs = rng.standard_normal(6) + 1j * rng.standard_normal(6)
            env_f = r ** min(abs(n + 1), 3)
            env_g = r ** min(abs(n), 3)
            f = decay * env_f * (cs[0] + cs[1] * r + cs[2] * r * r)
            g = decay * env_g * (cs[3] + cs[4] * r + cs[5] * r * r)
            modes[(m, n)] = SpinorMode(m=m, n=n, f=f, g=g)
    return SpinorField(grid, m_max, n_max, modes)


# ---------------------------------------------------------------------------
# Serialization: deterministic plain text, 17 significant digits.
# ---------------------------------------------------------------------------

_HEADER = "torus-dirac field v1"


def dump_field(fld: SpinorField) -> str:
    buf = io.StringIO()
    buf.write(f"{_HEADER}\n")
    buf.write(f"{fld.m_max} {fld.n_max} {fld.grid.node_count}\n")
    for (m, n) in sorted(fld.modes):
        md = fld.modes[(m, n)]
        for j in range(fld.grid.node_count):
            buf.write("%d %d %d %.17g %.17g %.17g %.17g\n" % (
                m, n, j, md.f[j].real, md.f[j].imag, md.g[j].real, md.g[j].imag))
    return buf.getvalue()


def save_field(fld: SpinorField, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_field(fld))


def parse_field(text: str) -> SpinorField:
    lines = text.splitlines()
    if not lines or lines[0] != _HEADER:
        raise ConfigError("not a field file (bad header)")
    try:
        m_max, n_max, node_count = (int(v) for v in lines[1].split())
    except (IndexError, ValueError) as exc:
        raise ConfigError(f"bad field file shape line: {exc}") from None
    grid = make_radial_grid(node_count)
    rows: dict = {}
    for ln in lines[2:]:
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 7:
            raise ConfigError(f"bad field row: {ln!r}")
        m, n, j = int(parts[0]), int(parts[1]), int(parts[2])
        fr, fi, gr, gi = (float(v) for v in parts[3:])
        f, g = rows.setdefault((m, n), (np.zeros(node_count, dtype=complex),
                                        np.zeros(node_count, dtype=complex)))
        f[j] = fr + 1j * fi
        g[j] = gr + 1j * gi
    modes = {k: SpinorMode(m=k[0], n=k[1], f=v[0], g=v[1])
             for k, v in rows.items()}
    return SpinorField(grid, m_max, n_max, modes)


def load_field(path) -> SpinorField:
    with open(path) as fh:
        return parse_field(fh.read())
