"""Command-line entry point: experiment runners with CSV + JSON manifest output.

Subcommands: profile-resolvent, decay, check-greens, weyl, spectrum,
check-range.  Every run resolves its configuration (JSON file plus flag
overrides), writes full-precision CSV (17 significant digits, header row,
LF), and drops a manifest JSON recording the resolved config, seed and
version so any run can be reproduced bit for bit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, experiments, greens, model, symbol
from .model import Boundary, Params, State, TorusGrid

EXCLUSION_MIN = 1e-10

_BOUNDARY_ALIASES = {"line": Boundary.LINE, "halfline": Boundary.HALFLINE}

_DEFAULTS_COMMON = {"m": 1.0, "grid_n": 8192, "grid_L": 160.0, "boundary": "line", "seed": 0}

_DEFAULTS = {
    "profile-resolvent": {"s_min": -5.0, "s_max": 5.0, "s_samples": 2001, "exclusion": 1e-3},
    "decay": {
        "data_class": "generic",
        "t_min": 1.0, "t_max": 1e4, "t_samples": 160,
        "fit_t_min": 1e2, "fit_t_max": 1e4,
        "grid_n": 16384, "grid_L": 800.0,
    },
    "check-greens": {"s_values": None, "grid_n": 32768, "grid_L": 320.0},
    "weyl": {"k_list": [1, 2, 4, 8, 16], "grid_n": 4096},
    "spectrum": {"xi_max": 10.0, "n_pts": 2001},
    "check-range": {"data_class": "prepared", "grid_n": 8192, "grid_L": 320.0},
}


class ConfigError(ValueError):
    pass


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    # accept a previously written manifest as a config
    if "config" in doc and "command" in doc:
        doc = doc["config"]
    return doc


def _resolve_config(command: str, args: argparse.Namespace) -> dict:
    cfg = dict(_DEFAULTS_COMMON)
    cfg.update(_DEFAULTS[command])
    cfg.update(_load_config(args.config))
    for key in ("m", "grid_n", "grid_L", "boundary", "seed"):
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            cfg[key] = val
    cfg["serial"] = bool(cfg.get("serial", False) or args.serial)
    _validate(cfg)
    return cfg


def _validate(cfg: dict) -> None:
    if not cfg["m"] > 0:
        raise ConfigError(f"m must be positive, got {cfg['m']}")
    n = int(cfg["grid_n"])
    if n < 2 or n & (n - 1):
        raise ConfigError(f"grid_n must be a power of two, got {n}")
    if cfg["boundary"] not in _BOUNDARY_ALIASES:
        raise ConfigError(f"boundary must be 'line' or 'halfline', got {cfg['boundary']!r}")
    if "exclusion" in cfg and cfg["exclusion"] < EXCLUSION_MIN:
        raise ConfigError(f"exclusion around +-sqrt(m) must be >= {EXCLUSION_MIN}")
    if "s_samples" in cfg and int(cfg["s_samples"]) < 1:
        raise ConfigError("s_samples must be >= 1")
    if "s_min" in cfg and not cfg["s_min"] < cfg["s_max"]:
        raise ConfigError("empty s-range: need s_min < s_max")
    if "data_class" in cfg and cfg["data_class"] not in experiments.DATA_CLASSES:
        raise ConfigError(
            f"data_class must be one of {list(experiments.DATA_CLASSES)}, got {cfg['data_class']!r}")


def _grid(cfg: dict) -> TorusGrid:
    return TorusGrid(float(cfg["grid_L"]), int(cfg["grid_n"]), _BOUNDARY_ALIASES[cfg["boundary"]])


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.16e}"


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _write_manifest(out: Path, command: str, cfg: dict, extra: dict | None = None) -> None:
    doc = {"command": command, "version": __version__, "seed": cfg.get("seed"), "config": cfg}
    if extra:
        doc.update(extra)
    out.with_suffix(out.suffix + ".manifest.json").write_text(
        json.dumps(doc, indent=2, default=float) + "\n")


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------

def _cmd_profile_resolvent(cfg: dict, out: Path) -> int:
    p = Params(float(cfg["m"]))
    s_vals = np.linspace(float(cfg["s_min"]), float(cfg["s_max"]), int(cfg["s_samples"]))
    excl = float(cfg["exclusion"])
    rows, warnings_list = [], []
    for s in s_vals:
        if min(abs(s - p.sqrt_m), abs(s + p.sqrt_m)) < excl:
            warnings_list.append(f"s={s!r} within {excl} of a spectral point; row skipped")
            continue
        nrm = symbol.resolvent_norm(float(s), p)
        ratio = nrm * abs(s - p.sqrt_m) * abs(s + p.sqrt_m) / (1.0 + s * s)
        rows.append((s, nrm, ratio))
    if not rows:
        raise ConfigError("s-range contains no admissible samples")
    _write_csv(out, ["s", "norm", "bound_ratio"], rows)
    _write_manifest(out, "profile-resolvent", cfg, {"warnings": warnings_list})
    return 0


def _cmd_decay(cfg: dict, out: Path) -> int:
    p = Params(float(cfg["m"]))
    grid = _grid(cfg)
    z0, _ = experiments.make_decay_data(cfg["data_class"], int(cfg["seed"]), grid, p)
    times = np.geomspace(float(cfg["t_min"]), float(cfg["t_max"]), int(cfg["t_samples"]))
    trace = experiments.decay_trace(z0, p, times)
    _write_csv(out, ["t", "E", "D"], list(zip(trace.t, trace.E, trace.D)))

    window = (float(cfg["fit_t_min"]), float(cfg["fit_t_max"]))
    band = experiments.EXPECTED_SLOPE_BANDS[cfg["data_class"]]
    try:
        fit = experiments.fit_decay_exponent(trace, window)
        summary = {
            "slope": fit.slope, "intercept": fit.intercept, "r_squared": fit.r_squared,
            "window": list(fit.window), "expected_slope_band": list(band),
            "status": "ok" if fit.conclusive else "inconclusive",
        }
    except ValueError as exc:
        summary = {"status": "inconclusive", "reason": str(exc),
                   "window": list(window), "expected_slope_band": list(band)}
    out.with_suffix(out.suffix + ".summary.json").write_text(
        json.dumps(summary, indent=2) + "\n")
    _write_manifest(out, "decay", cfg, {"summary": summary})
    return 0


def _cmd_check_greens(cfg: dict, out: Path) -> int:
    p = Params(float(cfg["m"]))
    cfg["boundary"] = "line"
    grid = _grid(cfg)
    s_values = cfg.get("s_values") or [0.5 * p.sqrt_m, 2.0 * p.sqrt_m, 10.0]
    data = model.random_smooth_state(int(cfg["seed"]), grid, p, "gaussian-packet")
    rows = []
    for s in s_values:
        row_status = "ok"
        try:
            resid = {}
            for path in ("symbol", "kernel"):
                z = greens.resolvent_apply_line(float(s), data, p, path=path)
                resid[path] = _roundtrip_residual(float(s), z, data, p)
            z_sym = greens.resolvent_apply_line(float(s), data, p, path="symbol")
            z_spc = symbol.resolvent_apply_spectral(float(s), data, p)
            cross = _state_gap(z_sym, z_spc, p)
            rows.append((s, resid["symbol"], resid["kernel"], cross, row_status))
        except (ValueError, greens.KernelTailError) as exc:
            rows.append((s, np.nan, np.nan, np.nan, f"error: {exc}"))
    _write_csv(out, ["s", "residual_symbol", "residual_kernel", "cross_gap", "status"], rows)
    _write_manifest(out, "check-greens", cfg)
    return 0


def _roundtrip_residual(s: float, z: State, data: State, p: Params) -> float:
    zh = model.to_spectral(z)
    xi2 = zh.xi ** 2
    ru = 1j * s * zh.u_hat - zh.v_hat
    rv = (p.m + xi2) * zh.u_hat + (1j * s + xi2) * zh.v_hat
    rec = model.SpectralState(zh.grid, ru, rv)
    dh = model.to_spectral(data)
    gap = model.SpectralState(zh.grid, rec.u_hat - dh.u_hat, rec.v_hat - dh.v_hat)
    return np.sqrt(model.x_norm_sq(gap, p) / max(model.x_norm_sq(dh, p), 1e-300))


def _state_gap(a: State, b: State, p: Params) -> float:
    diff = State(a.grid, a.u - b.u, a.v - b.v)
    return np.sqrt(model.x_norm_sq(diff, p) / max(model.x_norm_sq(b, p), 1e-300))


def _cmd_weyl(cfg: dict, out: Path) -> int:
    p = Params(float(cfg["m"]))
    k_list = [int(k) for k in cfg["k_list"]]
    need_L = 4.0 * max(k_list)
    if float(cfg["grid_L"]) < need_L:
        cfg["grid_L"] = 2.0 * need_L
    grid = _grid(cfg)
    rows = []
    for k in k_list:
        rep = experiments.weyl_report(k, p, grid)
        rows.append((k, rep.ratio, rep.opnorm_sq, rep.bound, rep.ratio <= rep.bound))
    _write_csv(out, ["k", "residual_ratio", "opnorm_sq", "bound", "within_bound"], rows)
    _write_manifest(out, "weyl", cfg)
    return 0


def _cmd_spectrum(cfg: dict, out: Path) -> int:
    p = Params(float(cfg["m"]))
    curves = symbol.spectral_curves(p, float(cfg["xi_max"]), int(cfg["n_pts"]))
    xc = symbol.critical_frequency(p)
    rows = []
    for xi, lp, lm in zip(curves.xi, curves.lam_plus, curves.lam_minus):
        regime = ("underdamped" if xi < xc else "overdamped") if xi != xc else "critical"
        rows.append((xi, lp.real, lp.imag, lm.real, lm.imag, regime))
    _write_csv(out, ["xi", "re_lam_plus", "im_lam_plus", "re_lam_minus", "im_lam_minus",
                     "regime"], rows)
    _write_manifest(out, "spectrum", cfg)
    return 0


def _cmd_check_range(cfg: dict, out: Path) -> int:
    p = Params(float(cfg["m"]))
    cfg["boundary"] = "line"
    grid = _grid(cfg)
    if cfg["data_class"] == "generic":
        z0 = model.random_smooth_state(int(cfg["seed"]), grid, p, "gaussian-packet")
    else:
        z0, _ = experiments.make_decay_data(cfg["data_class"], int(cfg["seed"]), grid, p)
    report = experiments.check_range_conditions(z0, p)
    names = ("a", "b", "c", "d")
    rows = [(nm, fr, ok) for nm, fr, ok in zip(names, report.tail_fractions, report.passed)]
    _write_csv(out, ["condition", "tail_fraction", "passed"], rows)
    _write_manifest(out, "check-range", cfg,
                    {"edge_decay_ok": report.edge_decay_ok, "all_passed": all(report.passed)})
    return 0


_COMMANDS = {
    "profile-resolvent": _cmd_profile_resolvent,
    "decay": _cmd_decay,
    "check-greens": _cmd_check_greens,
    "weyl": _cmd_weyl,
    "spectrum": _cmd_spectrum,
    "check-range": _cmd_check_range,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgkv",
        description="Numerical experiments for the Klein-Gordon equation with "
                    "Kelvin-Voigt damping.")
    parser.add_argument("--version", action="version", version=f"kgkv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON config (a manifest is also accepted)")
        sp.add_argument("--m", type=float, default=None)
        sp.add_argument("--grid-n", dest="grid_n", type=int, default=None)
        sp.add_argument("--grid-L", dest="grid_L", type=float, default=None)
        sp.add_argument("--boundary", choices=["line", "halfline"], default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default=f"{name}.csv")
        sp.add_argument("--serial", action="store_true",
                        help="force serial evaluation (outputs are deterministic either way)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args.command, args)
        return _COMMANDS[args.command](cfg, Path(args.out))
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
