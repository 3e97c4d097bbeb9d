"""Command-line verification front end.

Each subcommand runs one verification suite over a configured truncation,
writes a deterministic CSV table plus a JSON gate summary (no timestamps,
fixed row order, 17 significant digits), and exits 0 when every gate
passes, 1 when a mathematical gate fails, and 2 on configuration errors.

Configuration comes from an optional JSON file plus flag overrides; all
randomness is seeded (default 42, documented in every output header).  The
``TORUS_DIRAC_THREADS`` environment variable caps how many worker threads
the mode sweeps may use; output assembly is always single-threaded and
ordered, so the artifacts are byte-identical for identical inputs.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bessel, dirac, inverse, modes
from .errors import ConfigError, DomainError, RangeCapError

# Exponent for the per-member schatten_p_term column of the norms table:
# the smallest integer exponent safely inside the p > 3 summability range.
TERM_EXPONENT = 4.0

DEFAULT_TOLERANCES = {
    "wronskian": 1e-12,
    "inequality_slack": 1e-12,
    "q_residual": 1e-8,
    "selfadjoint_pairing": 1e-10,
    "selfadjoint_volume": 1e-8,
    "kernel_triviality": 1e-12,
    "envelope_growth": 0.05,
    "schur_dominance": 1e-8,
    "schatten_stability": 0.02,
}


# ---------------------------------------------------------------------------
# Configuration.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters shared by every subcommand."""

    node_count: int = 64
    m_max: int = 20
    n_max: int = 20
    tolerances: dict = field(default_factory=dict)
    p_values: tuple = (2.5, 3.5, 4.0)
    output_dir: Path = Path("reports")
    seed: int = 42

    def __post_init__(self):
        if self.node_count < 8:
            raise ConfigError(f"node_count must be >= 8, got {self.node_count}")
        if self.m_max < 1 or self.n_max < 1:
            raise ConfigError("truncation orders m_max, n_max must be >= 1")
        for name, value in self.tolerances.items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {name!r} (known: "
                                  f"{', '.join(sorted(DEFAULT_TOLERANCES))})")
            if not value > 0:
                raise ConfigError(f"tolerance {name} must be positive")
        if not self.p_values:
            raise ConfigError("p_values must not be empty")
        for p in self.p_values:
            if not p > 2:
                raise ConfigError(f"Schatten exponents must exceed 2, got {p}")

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))


_CONFIG_KEYS = ("node_count", "m_max", "n_max", "tolerances", "p_values",
                "output_dir", "seed")


def _load_config(args) -> RunConfig:
    """Merge defaults <- JSON config file <- command-line flags."""
    data: dict = {}
    if args.config is not None:
        try:
            raw = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        try:
            loaded = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        for key in loaded:
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
        data.update(loaded)
    if args.nodes is not None:
        data["node_count"] = args.nodes
    if args.modes is not None:
        parts = args.modes.split(",")
        if len(parts) != 2:
            raise ConfigError("--modes expects M,N")
        try:
            data["m_max"], data["n_max"] = (int(p) for p in parts)
        except ValueError:
            raise ConfigError("--modes expects integers M,N") from None
    tols = dict(data.get("tolerances", {}))
    for entry in args.tol or ():
        name, sep, value = entry.partition("=")
        if not sep:
            raise ConfigError("--tol expects NAME=VALUE")
        try:
            tols[name] = float(value)
        except ValueError:
            raise ConfigError(f"--tol {name}: bad value {value!r}") from None
    data["tolerances"] = tols
    if args.p is not None:
        try:
            data["p_values"] = tuple(float(p) for p in args.p.split(","))
        except ValueError:
            raise ConfigError("--p expects a comma-separated list of reals") from None
    if args.out is not None:
        data["output_dir"] = args.out
    if args.seed is not None:
        data["seed"] = args.seed
    try:
        data["node_count"] = int(data.get("node_count", 64))
        data["m_max"] = int(data.get("m_max", 20))
        data["n_max"] = int(data.get("n_max", 20))
        data["seed"] = int(data.get("seed", 42))
    except (TypeError, ValueError):
        raise ConfigError("node_count, m_max, n_max, seed must be integers") from None
    data["p_values"] = tuple(float(p) for p in data.get("p_values", (2.5, 3.5, 4.0)))
    data["output_dir"] = Path(data.get("output_dir", "reports"))
    return RunConfig(**data)


# ---------------------------------------------------------------------------
# Shared plumbing: worker pool, CSV/JSON writers, gate records.
# ---------------------------------------------------------------------------

def _worker_count() -> int:
    # The env var caps the pool; a hard ceiling keeps the per-frequency
    # kernel/norm engine caches large enough for every live worker.
    cap = os.environ.get("TORUS_DIRAC_THREADS")
    if cap is None:
        workers = os.cpu_count() or 1
    else:
        try:
            workers = int(cap)
        except ValueError:
            raise ConfigError(
                f"TORUS_DIRAC_THREADS must be an integer, got {cap!r}") from None
    return max(1, min(workers, 8))


def _ordered_map(fn, items):
    """Map preserving input order; parallel only when a pool would help.

    Every task is a pure function, so scheduling cannot change any value,
    and the ordered reduction keeps the serialized outputs byte-identical
    across worker counts.
    """
    items = list(items)
    workers = _worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _write_csv(path: Path, header_lines, columns, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


@dataclass(frozen=True)
class Gate:
    """One pass/fail verdict with its worst offender."""

    check: str
    passed: bool
    m: int
    n: int
    value: float
    tolerance: float

    def to_json(self) -> dict:
        return {"check": self.check, "pass": bool(self.passed),
                "worst_case": {"m": int(self.m), "n": int(self.n),
                               "value": float(self.value),
                               "tolerance": float(self.tolerance)}}


def _write_summary(config: RunConfig, command: str, gates) -> int:
    payload = {
        "command": command,
        "node_count": config.node_count,
        "truncation": [config.m_max, config.n_max],
        "seed": config.seed,
        "gates": [g.to_json() for g in gates],
        "pass": all(g.passed for g in gates),
    }
    path = config.output_dir / f"{command.replace('-', '_')}_summary.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    for g in gates:
        status = "pass" if g.passed else "FAIL"
        print(f"{command}: {g.check}: {status} "
              f"(worst {g.value:.3e} vs {g.tolerance:.3e} at "
              f"mode ({g.m}, {g.n}))")
    return 0 if payload["pass"] else 1


def _common_header(config: RunConfig) -> list:
    return [f"nodes: {config.node_count}",
            f"truncation: m_max={config.m_max} n_max={config.n_max}",
            f"seed: {config.seed}"]


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------

def cmd_bessel_verify(config: RunConfig, args) -> int:
    """Wronskian sweep plus the monotonicity/product inequality suite."""
    k_scale = 1.0 + 1e-6 if getattr(args, "inject_k_perturbation", False) else 1.0

    orders = list(range(101))
    t_wr = np.geomspace(1e-3, 1e3, 400)
    res = bessel.wronskian_residual(orders, t_wr)
    rows = []
    for n in orders:
        k = int(np.argmax(res[n]))
        rows.append((n, float(t_wr[k]), float(res[n, k])))
    worst_n = max(orders, key=lambda n: rows[n][2])
    wr_tol = config.tol("wronskian")
    _write_csv(config.output_dir / "wronskian.csv",
               _common_header(config) + [
                   "max |t (I_n K_{n+1} + I_{n+1} K_n) - 1| per order",
                   "argument grid: 400 log-spaced points in [1e-3, 1e3]"],
               ("n", "worst_t", "max_abs_residual"), rows)
    gates = [Gate("wronskian", rows[worst_n][2] < wr_tol,
                  0, worst_n, rows[worst_n][2], wr_tol)]

    slack_tol = config.tol("inequality_slack")
    t_iq = np.geomspace(1e-3, 1e3, 200)
    report = bessel.inequality_suite(30, t_iq, slack_tol=slack_tol,
                                     k_scale=k_scale)
    head = _common_header(config) + [
        "inequality violations (empty when the suite passes)",
        f"orders <= 30, 200 log-spaced arguments, checks run: {report.checks_run}"]
    if k_scale != 1.0:
        head.append(f"fault injection active: K values scaled by {k_scale!r}")
    _write_csv(config.output_dir / "inequalities.csv", head,
               ("check", "n", "t", "lhs", "rhs", "slack"),
               [(v.check, v.n, v.t, v.lhs, v.rhs, v.slack)
                for v in report.violations])
    if report.violations:
        worst = min(report.violations, key=lambda v: v.slack)
        gates.append(Gate("inequality_slack", False, 0, worst.n,
                          -worst.slack, slack_tol))
    else:
        gates.append(Gate("inequality_slack", True, 0, 0, 0.0, slack_tol))
    return _write_summary(config, "bessel-verify", gates)


def cmd_q_residual(config: RunConfig, args) -> int:
    """Composition residuals of the inverse on one seeded in-domain field."""
    grid = modes.make_radial_grid(config.node_count)
    fld = modes.seeded_field(grid, config.m_max, config.n_max, seed=config.seed)
    rows = inverse.residual_check(fld, derivative_mode="analytic")
    _write_csv(config.output_dir / "q_residual.csv",
               _common_header(config) + [
                   "per-mode relative residuals of both composition orders",
                   "field: seeded smooth modes projected into the domain",
                   "boundary_abs column is informational (not gated here)"],
               ("m", "n", "dq_residual", "qd_residual", "boundary_abs"),
               [(r.m, r.n, r.dq_residual, r.qd_residual, r.boundary_abs)
                for r in rows])
    tol = config.tol("q_residual")
    worst = max(rows, key=lambda r: max(r.dq_residual, r.qd_residual))
    value = max(worst.dq_residual, worst.qd_residual)
    return _write_summary(config, "q-residual",
                          [Gate("q_residual", value < tol,
                                worst.m, worst.n, value, tol)])


def _mode_inner(grid, x, y) -> complex:
    mu = grid.measure
    return complex(np.sum(mu * (np.conj(x.f) * y.f + np.conj(x.g) * y.g)))


def _mode_trace(x, y) -> complex:
    return complex(np.conj(x.g[-1]) * y.f[-1] - np.conj(x.f[-1]) * y.g[-1])


def cmd_selfadjoint(config: RunConfig, args) -> int:
    """Boundary pairing on in-domain pairs and the volume/boundary identity."""
    grid = modes.make_radial_grid(config.node_count)
    pair_tol = config.tol("selfadjoint_pairing")
    vol_tol = config.tol("selfadjoint_volume")
    n_pairs = 10
    worst_pairing = {}   # (m, n) -> max normalized in-domain pairing term
    worst_volume = {}    # (m, n) -> max normalized identity residual
    pair_gate = (0, 0, 0.0)
    vol_gate = (0, 0, 0.0)
    for k in range(n_pairs):
        fx = modes.seeded_field(grid, config.m_max, config.n_max,
                                seed=config.seed + 2 * k)
        fy = modes.seeded_field(grid, config.m_max, config.n_max,
                                seed=config.seed + 2 * k + 1)
        px = dirac.project_field_to_domain(fx)
        py = dirac.project_field_to_domain(fy)
        scale = px.norm() * py.norm()
        pairing = abs(dirac.greens_boundary_pairing(px, py)) / scale
        # volume identity on the unprojected (general) pair
        dx = dirac.apply_dirac(fx)
        dy = dirac.apply_dirac(fy)
        lhs = dirac.inner_product(dx, fy) - dirac.inner_product(fx, dy)
        rhs = dirac.greens_boundary_pairing(fx, fy)
        floor = 0.0
        vol_rows = {}
        for key in sorted(fx.modes):
            xm, ym = fx.modes[key], fy.modes[key]
            dxm, dym = dx.modes[key], dy.modes[key]
            sc = (math.sqrt(dxm.norm_sq(grid) * ym.norm_sq(grid))
                  + math.sqrt(xm.norm_sq(grid) * dym.norm_sq(grid)))
            floor += sc
            res = abs((_mode_inner(grid, dxm, ym) - _mode_inner(grid, xm, dym))
                      - _mode_trace(xm, ym))
            vol_rows[key] = res / max(sc, 1e-300)
            term = abs(_mode_trace(px.modes[key], py.modes[key])) / scale
            if term > worst_pairing.get(key, -1.0):
                worst_pairing[key] = term
        volume = abs(lhs - rhs) / max(abs(lhs), abs(rhs), floor)
        for key, res in vol_rows.items():
            if res > worst_volume.get(key, -1.0):
                worst_volume[key] = res
        if pairing > pair_gate[2]:
            key = max(worst_pairing, key=worst_pairing.get)
            pair_gate = (key[0], key[1], pairing)
        if volume > vol_gate[2]:
            key = max(vol_rows, key=vol_rows.get)
            vol_gate = (key[0], key[1], volume)
    _write_csv(config.output_dir / "selfadjoint.csv",
               _common_header(config) + [
                   f"{n_pairs} seeded field pairs (seeds seed+0 .. seed+{2 * n_pairs - 1})",
                   "pairing_rel: boundary pairing term of the projected pair,",
                   "  normalized by the product of field norms (max over pairs)",
                   "volume_rel: |volume bracket - boundary trace| for the raw",
                   "  pair, normalized by the mode's Cauchy-Schwarz scale"],
               ("m", "n", "pairing_rel", "volume_rel"),
               [(m, n, worst_pairing[(m, n)], worst_volume[(m, n)])
                for (m, n) in sorted(worst_pairing)])
    gates = [
        Gate("selfadjoint_pairing", pair_gate[2] < pair_tol,
             pair_gate[0], pair_gate[1], pair_gate[2], pair_tol),
        Gate("selfadjoint_volume", vol_gate[2] < vol_tol,
             vol_gate[0], vol_gate[1], vol_gate[2], vol_tol),
    ]
    return _write_summary(config, "selfadjoint", gates)


def cmd_kernel_check(config: RunConfig, args) -> int:
    """Boundary functional of the regular solution must be exactly one."""
    grid = modes.make_radial_grid(config.node_count)
    tol = config.tol("kernel_triviality")
    rows = []
    errors = 0
    worst = (0, 0, -1.0)
    for m in range(-config.m_max, config.m_max + 1):
        for n in range(-config.n_max, config.n_max + 1):
            try:
                val = dirac.boundary_functional(
                    dirac.regular_unit_solution(m, n, grid))
            except RangeCapError:
                rows.append((m, n, float("nan"), float("nan"), float("nan")))
                errors += 1
                continue
            err = abs(val - 1.0)
            rows.append((m, n, val.real, val.imag, err))
            if err > worst[2]:
                worst = (m, n, err)
    gates = [Gate("kernel_triviality", worst[2] < tol and errors == 0,
                  worst[0], worst[1], worst[2], tol)]
    if errors:
        bad = next(r for r in rows if math.isnan(r[4]))
        gates.append(Gate("mode_range", False, bad[0], bad[1],
                          float(errors), 0.0))
    _write_csv(config.output_dir / "kernel_check.csv",
               _common_header(config) + [
                   "boundary functional of the regular homogeneous solution",
                   "exact value is 1 for every mode (kernel triviality);",
                   "rows with nan mark modes beyond the supported range"],
               ("m", "n", "value_re", "value_im", "abs_error"), rows)
    return _write_summary(config, "kernel-check", gates)


def _member_keys(m_max: int, n_max: int):
    for fam in ("R", "S"):
        for m in range(1, m_max + 1):
            for n in range(-n_max, n_max + 1):
                for i in (0, 1):
                    for j in (0, 1):
                        yield (fam, i, j, m, n)
    for fam in ("T1", "T2"):
        for n in range(n_max + 1):
            yield (fam, 0, 0, 0, n)


def _member_row(key, node_count: int):
    fam, i, j, m, n = key
    try:
        spec = inverse.IntegralOperatorSpec(family=fam, m=m, n=n, i=i, j=j)
        hs = inverse.hs_norm_sq(spec)
        bound = inverse.schur_young_bound(spec)
        sig = inverse.member_singular_values(spec, node_count)
        return (fam, i, j, m, n, hs, bound, float(sig[0]),
                float(np.sum(sig ** TERM_EXPONENT)))
    except RangeCapError:
        nan = float("nan")
        return (fam, i, j, m, n, nan, nan, nan, nan)


def cmd_norms_table(config: RunConfig, args) -> int:
    """Full per-member norm/spectrum table plus the envelope-stability gate."""
    node_count = config.node_count
    mm, nn = config.m_max, config.n_max

    # one task per (family-pair, frequency): each worker owns its frequency's
    # kernel and norm engines for the whole task, so pools never fight over
    # the per-frequency caches
    def freq_rows(m):
        r_rows = [_member_row(k, node_count) for k in _member_keys(mm, nn)
                  if k[0] == "R" and k[3] == m]
        s_rows = [_member_row(k, node_count) for k in _member_keys(mm, nn)
                  if k[0] == "S" and k[3] == m]
        return r_rows, s_rows

    grouped = _ordered_map(freq_rows, range(1, mm + 1))
    rows = [row for r, _ in grouped for row in r]
    rows += [row for _, s in grouped for row in s]
    rows += [_member_row(k, node_count) for k in _member_keys(mm, nn)
             if k[0] in ("T1", "T2")]

    errors = [r for r in rows if math.isnan(r[5])]
    dom_tol = config.tol("schur_dominance")
    dom = (0, 0, -math.inf)
    for r in rows:
        if not math.isnan(r[5]) and r[7] - r[6] > dom[2]:
            dom = (r[3], r[4], r[7] - r[6])
    gates = [Gate("schur_dominance", dom[2] <= dom_tol and not errors,
                  dom[0], dom[1], dom[2], dom_tol)]

    env_tol = config.tol("envelope_growth")
    try:
        c_half = inverse.fitted_envelope_constant(max(1, mm // 2), max(1, nn // 2))
        c_full = inverse.fitted_envelope_constant(mm, nn)
        growth = (c_full - c_half) / c_half
        gates.append(Gate("envelope_growth", growth <= env_tol, mm, nn,
                          growth, env_tol))
    except RangeCapError:
        gates.append(Gate("envelope_growth", False, mm, nn,
                          float(len(errors)), env_tol))
    if errors:
        gates.append(Gate("mode_range", False, errors[0][3], errors[0][4],
                          float(len(errors)), 0.0))

    _write_csv(config.output_dir / "norms_table.csv",
               _common_header(config) + [
                   "squared HS norm, operator-norm bound, and spectrum summary",
                   "per kernel family member; rows lexicographic in",
                   f"(family, m, n); schatten_p_term uses p = {TERM_EXPONENT:g};",
                   "rows with nan mark modes beyond the supported range"],
               ("family", "i", "j", "m", "n", "hs_norm_sq", "op_bound",
                "sigma_max", "schatten_p_term"), rows)
    return _write_summary(config, "norms-table", gates)


def cmd_schatten(config: RunConfig, args) -> int:
    """Schatten partial sums per exponent with truncation-stability ratios."""
    node_count = config.node_count
    mm, nn = config.m_max, config.n_max
    stab_tol = config.tol("schatten_stability")

    def freq_spectra(m):
        out = []
        for n in range(-nn, nn + 1):
            try:
                out.append((n, inverse.singular_values(m, n, node_count)))
            except RangeCapError:
                out.append((n, None))
        return out

    table = {}
    errors = []
    for m, chunk in zip(range(mm + 1), _ordered_map(freq_spectra, range(mm + 1))):
        for n, sig in chunk:
            if sig is None:
                errors.append((m, n))
            else:
                table[(m, n)] = sig

    def partial(p, m_top, n_top):
        if not errors:
            return inverse.schatten_partial_sum(p, m_top, n_top, node_count,
                                                sigma_table=table)
        total = 0.0
        for m in range(m_top + 1):
            weight = 1.0 if m == 0 else 2.0
            for n in range(-n_top, n_top + 1):
                sig = table.get((m, n))
                if sig is not None:
                    total += weight * float(np.sum(sig ** p))
        return total

    m_half, n_half = max(1, mm // 2), max(1, nn // 2)
    rows = []
    gates = []
    for p in config.p_values:
        half = partial(p, m_half, n_half)
        full = partial(p, mm, nn)
        growth = (full - half) / half
        stable = growth <= stab_tol
        rows.append((p, m_half, n_half, half, mm, nn, full, growth, stable))
        gates.append(Gate(f"schatten_stability_p{p:g}", stable, mm, nn,
                          growth, stab_tol))
    if errors:
        gates.append(Gate("mode_range", False, errors[0][0], errors[0][1],
                          float(len(errors)), 0.0))
    _write_csv(config.output_dir / "schatten.csv",
               _common_header(config) + [
                   "partial sums of sigma^p over mode blocks (|m| <= M via",
                   "mirror weights) at half and full truncation, with the",
                   "relative growth ratio gating truncation stability"],
               ("p", "m_half", "n_half", "sum_half", "m_full", "n_full",
                "sum_full", "growth", "stable"), rows)
    return _write_summary(config, "schatten", gates)


# ---------------------------------------------------------------------------
# Argument parsing and dispatch.
# ---------------------------------------------------------------------------

_COMMANDS = {
    "bessel-verify": cmd_bessel_verify,
    "q-residual": cmd_q_residual,
    "selfadjoint": cmd_selfadjoint,
    "kernel-check": cmd_kernel_check,
    "norms-table": cmd_norms_table,
    "schatten": cmd_schatten,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, metavar="FILE",
                        help="JSON config file (flags override it)")
    common.add_argument("--nodes", type=int, metavar="N",
                        help="radial grid size (default 64)")
    common.add_argument("--modes", metavar="M,N",
                        help="truncation orders (default 20,20)")
    common.add_argument("--tol", action="append", metavar="NAME=VALUE",
                        help="override one gate tolerance (repeatable)")
    common.add_argument("--p", metavar="LIST",
                        help="comma-separated Schatten exponents (> 2)")
    common.add_argument("--out", type=Path, metavar="DIR",
                        help="output directory (default ./reports)")
    common.add_argument("--seed", type=int, metavar="S",
                        help="seed for the random smooth fields (default 42)")
    parser = argparse.ArgumentParser(
        prog="torus-dirac",
        description="Verification suites for the solid-torus Dirac inverse.")
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "bessel-verify": "Wronskian identity sweep and inequality suite",
        "q-residual": "composition residuals of the explicit inverse",
        "selfadjoint": "boundary pairing and volume/boundary identity",
        "kernel-check": "boundary functional of the regular solution",
        "norms-table": "kernel norm/spectrum table and envelope stability",
        "schatten": "Schatten partial sums and truncation stability",
    }
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=descriptions[name])
        p.set_defaults(fn=fn)
        if name == "bessel-verify":
            p.add_argument("--inject-k-perturbation", action="store_true",
                           help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        config.output_dir.mkdir(parents=True, exist_ok=True)
        return args.fn(config, args)
    except (ConfigError, DomainError, RangeCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
