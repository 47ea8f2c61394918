"""Command-line front end.

Configuration is layered: a ``--preset`` first, then an INI file given with
``--config`` (sections ``[link]`` and ``[run]``), then ``--set KEY=VALUE``
overrides.  Angles need an explicit ``deg`` or ``rad`` suffix.  Every run
writes its CSV output and a ``manifest.json`` into ``--out``; ``replay``
re-runs a manifest and reproduces the CSV files byte for byte.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import re
import sys
import time
from dataclasses import asdict, fields
from pathlib import Path

import numpy as np

from . import __version__
from .channel import (
    approximation_variance,
    circulant_channel,
    circulant_residual,
    compensation_pair,
    eigenvalue_spread,
    exact_channel,
    model_channel,
)
from .geometry import ConfigError, LinkConfig, reference_distance
from .modem import DetectorCapError
from .presets import SPACING_RADII_OVER_LAMBDA, PRESETS
from .simulate import (
    SweepConfig,
    complexity_counts,
    complexity_ratios,
    run_ber_sweep,
    spacing_search,
)

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

LINK_FIELDS = [f.name for f in fields(LinkConfig)]
ANGLE_FIELDS = {"theta", "phi", "alpha_tx", "alpha_rx"}
LENGTH_FIELDS = {"r_tx", "r_rx", "d_centers", "wavelength"}
INT_FIELDS = {"n_tx", "n_rx"}
ALIASES = {"n": ("n_tx", "n_rx"), "radius": ("r_tx", "r_rx")}

RUN_DEFAULTS = {
    "ber-sweep": {
        "snr_db": "0:2:10",
        "trials": "10000",
        "seed": "0",
        "scheme": "both",
        "constellation": "bpsk",
        "channel": "exact",
        "normalize": "false",
    },
    "spacing-search": {
        "radii_over_lambda": ",".join(f"{r:g}" for r in SPACING_RADII_OVER_LAMBDA),
        "threshold": "0.01",
        "n_max": "256",
    },
    "channel-report": {},
    "complexity": {"n": "8", "k": "4"},
}
DEFAULT_PRESET = {"spacing-search": "spacing"}


class CliError(Exception):
    """Configuration problem; reported with exit code 1."""


# -- value parsing ---------------------------------------------------------

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"


def parse_number(text: str, field: str) -> float:
    """Parse ``1.5``, ``pi``, ``4pi``, ``4*pi``, ``pi/6`` or ``2*pi/3``."""
    t = text.strip().replace(" ", "").lower()
    m = re.fullmatch(rf"({_NUM})?\*?(pi)?(?:/({_NUM}))?", t)
    if not t or m is None or (m.group(1) is None and m.group(2) is None):
        raise CliError(f"field '{field}': cannot parse number {text!r}")
    value = float(m.group(1)) if m.group(1) is not None else 1.0
    if m.group(2):
        value *= math.pi
    if m.group(3):
        value /= float(m.group(3))
    return value


def parse_angle(text: str, field: str) -> float:
    t = text.strip().lower()
    for suffix, factor in (("deg", math.pi / 180.0), ("rad", 1.0)):
        if t.endswith(suffix):
            return parse_number(t[: -len(suffix)], field) * factor
    raise CliError(f"field '{field}': angle {text!r} needs a 'deg' or 'rad' suffix")


def parse_link_value(field: str, text: str):
    if field in ANGLE_FIELDS:
        return parse_angle(text, field)
    if field in INT_FIELDS:
        try:
            return int(text.strip())
        except ValueError:
            raise CliError(f"field '{field}': expected an integer, got {text!r}") from None
    t = text.strip()
    if field in LENGTH_FIELDS and t.lower().endswith("m"):
        t = t[:-1]
    return parse_number(t, field)


def parse_range(text: str, field: str) -> list[float]:
    """``a,b,c`` or an inclusive ``start:step:stop`` range."""
    t = text.strip()
    try:
        if ":" in t:
            start, step, stop = (float(x) for x in t.split(":"))
            if step <= 0:
                raise ValueError
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(count)]
        return [float(x) for x in t.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"field '{field}': cannot parse list {text!r}") from None


def parse_bool(text: str, field: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise CliError(f"field '{field}': expected true/false, got {text!r}")


# -- configuration resolution ----------------------------------------------


def _link_to_raw(cfg: LinkConfig) -> dict[str, str]:
    raw = {}
    for name in LINK_FIELDS:
        value = getattr(cfg, name)
        raw[name] = f"{value!r}rad" if name in ANGLE_FIELDS else repr(value)
    return raw


def _read_config_file(path: str) -> tuple[dict[str, str], dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise CliError(f"cannot read config file {path!r}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise CliError(f"{path}: {exc}") from None
    unknown = set(parser.sections()) - {"link", "run"}
    if unknown:
        raise CliError(f"{path}: unknown section(s) {sorted(unknown)}; use [link] and [run]")
    link = dict(parser["link"]) if parser.has_section("link") else {}
    run = dict(parser["run"]) if parser.has_section("run") else {}
    return link, run


def _put(raw_link: dict, raw_run: dict, key: str, value: str, run_keys) -> None:
    key = key.strip().lower()
    if key in ALIASES:
        for k in ALIASES[key]:
            raw_link[k] = value
    elif key in LINK_FIELDS:
        raw_link[key] = value
    elif key in run_keys:
        raw_run[key] = value
    else:
        raise CliError(f"unknown field '{key}'")


def resolve(command: str, args: argparse.Namespace) -> dict:
    """Merge preset, file and overrides into a JSON-ready configuration."""
    run_keys = RUN_DEFAULTS[command]
    raw_link: dict[str, str] = {}
    raw_run: dict[str, str] = dict(run_keys)
    preset = args.preset or DEFAULT_PRESET.get(command)
    if preset:
        if preset not in PRESETS:
            raise CliError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        raw_link.update(_link_to_raw(PRESETS[preset]()))
    if args.config:
        file_link, file_run = _read_config_file(args.config)
        for k, v in file_link.items():
            _put(raw_link, raw_run, k, v, ())
        for k, v in file_run.items():
            _put(raw_link, raw_run, k, v, run_keys)
    for item in args.set or ():
        if "=" not in item:
            raise CliError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        _put(raw_link, raw_run, k, v, run_keys)
    for k in run_keys:
        flag = getattr(args, k, None)
        if flag is not None:
            raw_run[k] = str(flag)

    resolved: dict = {"command": command, "preset": preset}
    if command != "complexity":
        missing = [f for f in ("n_tx", "n_rx", "r_tx", "r_rx", "d_centers", "wavelength", "beta")
                   if f not in raw_link]
        if missing:
            raise CliError(f"missing required field '{missing[0]}'")
        values = {k: parse_link_value(k, v) for k, v in raw_link.items()}
        try:
            link = LinkConfig(**values)
        except ConfigError as exc:
            raise CliError(f"field '{exc.field}': {exc.message}") from None
        resolved["link"] = asdict(link)
    resolved["run"] = _parse_run(command, raw_run)
    return resolved


def _parse_run(command: str, raw: dict[str, str]) -> dict:
    def as_int(key):
        try:
            return int(raw[key])
        except ValueError:
            raise CliError(f"field '{key}': expected an integer, got {raw[key]!r}") from None

    if command == "ber-sweep":
        run = {
            "snr_db": parse_range(raw["snr_db"], "snr_db"),
            "trials": as_int("trials"),
            "seed": as_int("seed"),
            "scheme": raw["scheme"].strip().lower(),
            "constellation": raw["constellation"].strip().lower(),
            "channel": raw["channel"].strip().lower(),
            "normalize": parse_bool(raw["normalize"], "normalize"),
        }
        if run["scheme"] not in ("proposed", "traditional", "both"):
            raise CliError(f"field 'scheme': expected proposed, traditional or both, got {run['scheme']!r}")
        if not run["snr_db"]:
            raise CliError("field 'snr_db': empty list")
        return run
    if command == "spacing-search":
        return {
            "radii_over_lambda": parse_range(raw["radii_over_lambda"], "radii_over_lambda"),
            "threshold": parse_number(raw["threshold"], "threshold"),
            "n_max": as_int("n_max"),
        }
    if command == "complexity":
        return {"n": as_int("n"), "k": as_int("k")}
    return {}


# -- output ----------------------------------------------------------------


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else fmt(v) for v in row])


def _print_table(header: list[str], rows) -> None:
    text = [[v if isinstance(v, str) else f"{v:.6g}" if isinstance(v, float) else str(v)
             for v in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in text)) if text else len(h)
              for i, h in enumerate(header)]
    print("  ".join(h.rjust(w) for h, w in zip(header, widths)))
    for r in text:
        print("  ".join(c.rjust(w) for c, w in zip(r, widths)))


# -- commands --------------------------------------------------------------


def cmd_channel_report(resolved: dict, out: Path) -> list[str]:
    link = LinkConfig(**resolved["link"])
    h = exact_channel(link)
    circ = circulant_channel(link)
    pair = compensation_pair(link)
    rows = []
    for name, arr in (
        ("H", h.entries),
        ("gamma", pair.gamma[None, :]),
        ("delta", pair.delta[None, :]),
        ("H_circulant", circ.matrix),
        ("eigenvalues", circ.eigenvalues[None, :]),
    ):
        for (i, j), v in np.ndenumerate(arr):
            rows.append((name, i + 1, j + 1, v.real, v.imag))
    _write_csv(out / "channel.csv", ["quantity", "row", "col", "real", "imag"], rows)

    compensated = np.conj(pair.delta)[:, None] * h.entries * np.conj(pair.gamma)[None, :]
    metrics = [
        ("reference_distance", reference_distance(link)),
        ("sigma_sq", eigenvalue_spread(circ.eigenvalues)),
        ("delta_sq", approximation_variance(h, pair, circ)),
        ("residual_exact", circulant_residual(h.entries)),
        ("residual_exact_compensated", circulant_residual(compensated)),
        ("residual_model_compensated",
         circulant_residual(np.conj(pair.delta)[:, None] * model_channel(circ, pair)
                            * np.conj(pair.gamma)[None, :])),
    ]
    _write_csv(out / "metrics.csv", ["metric", "value"], metrics)
    _print_table(["metric", "value"], metrics)
    return ["channel.csv", "metrics.csv"]


def cmd_ber_sweep(resolved: dict, out: Path) -> list[str]:
    run = resolved["run"]
    link = LinkConfig(**resolved["link"])
    schemes = ["proposed", "traditional"] if run["scheme"] == "both" else [run["scheme"]]
    rows = []
    for scheme in schemes:
        try:
            cfg = SweepConfig(
                link=link,
                snr_db_points=run["snr_db"],
                trials_per_point=run["trials"],
                seed=run["seed"],
                scheme=scheme,
                constellation=run["constellation"],
                channel=run["channel"],
                normalize=run["normalize"],
            )
        except ValueError as exc:
            raise CliError(str(exc)) from None
        for p in run_ber_sweep(cfg):
            rows.append((p.snr_db, p.scheme, p.trials, p.bit_errors, p.ber, p.theory_ber))
    header = ["snr_db", "scheme", "trials", "bit_errors", "ber", "theory_ber"]
    _write_csv(out / "ber.csv", header, rows)
    _print_table(header, [r[:5] + ("" if r[5] is None else r[5],) for r in rows])
    return ["ber.csv"]


def cmd_spacing_search(resolved: dict, out: Path) -> list[str]:
    run = resolved["run"]
    base = LinkConfig(**resolved["link"])
    lam = base.wavelength
    points = spacing_search(
        [r * lam for r in run["radii_over_lambda"]], run["threshold"], base, run["n_max"]
    )
    rows = [(p.radius / lam, p.best_count, p.spacing / lam, p.sigma_sq) for p in points]
    header = ["radius_over_lambda", "best_n", "spacing_over_lambda", "sigma_sq"]
    _write_csv(out / "spacing.csv", header, rows)
    _print_table(header + ["ok"], [r + ("yes" if p.satisfied else "NO",) for r, p in zip(rows, points)])
    print(f"link distance d = {base.d_centers:g} m, wavelength = {lam:g} m")
    return ["spacing.csv"]


def cmd_complexity(resolved: dict, out: Path) -> list[str]:
    n, k = resolved["run"]["n"], resolved["run"]["k"]
    try:
        reports = [complexity_counts(n, k, "fast"), complexity_counts(n, k, "traditional")]
    except ValueError as exc:
        raise CliError(str(exc)) from None
    rows = [(r.scheme, r.n, r.k, r.complex_additions, r.complex_multiplications) for r in reports]
    header = ["scheme", "n", "k", "additions", "multiplications"]
    _write_csv(out / "complexity.csv", header, rows)
    _print_table(header, rows)
    add_ratio, mul_ratio = complexity_ratios(n, k)
    print(f"traditional/fast: additions {float(add_ratio):.6g}, multiplications {float(mul_ratio):.6g}")
    return ["complexity.csv"]


COMMANDS = {
    "channel-report": cmd_channel_report,
    "ber-sweep": cmd_ber_sweep,
    "spacing-search": cmd_spacing_search,
    "complexity": cmd_complexity,
}


def execute(resolved: dict, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    outputs = COMMANDS[resolved["command"]](resolved, out)
    manifest = {
        "command": resolved["command"],
        "config": resolved,
        "seed": resolved.get("run", {}).get("seed"),
        "version": __version__,
        "outputs": outputs,
        "duration_s": time.perf_counter() - start,
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uca-mimo",
        description="UCA line-of-sight MIMO with channel-independent beamforming.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--preset", help=f"start from a named link ({', '.join(sorted(PRESETS))})")
        p.add_argument("--config", help="INI file with [link] and [run] sections")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override one field; repeatable")
        p.add_argument("--out", default="out", help="output directory (default: out)")

    p = sub.add_parser("channel-report", help="channel matrices, beamformers and quality metrics")
    common(p)

    p = sub.add_parser("ber-sweep", help="Monte Carlo BER versus SNR")
    common(p)
    p.add_argument("--snr-db", dest="snr_db", help="list a,b,c or inclusive start:step:stop")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--scheme", choices=["proposed", "traditional", "both"])
    p.add_argument("--constellation")
    p.add_argument("--channel", choices=["exact", "model"],
                   help="propagate through the exact channel or its compensated circulant model")
    p.add_argument("--normalize", choices=["true", "false"],
                   help="scale the channel to unit mean subchannel power gain")

    p = sub.add_parser("spacing-search", help="largest antenna count per radius (coaxial arrays)")
    common(p)
    p.add_argument("--radii-over-lambda", dest="radii_over_lambda")
    p.add_argument("--threshold")
    p.add_argument("--n-max", dest="n_max", type=int)

    p = sub.add_parser("complexity", help="operation counts of both detectors")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--out", default="out")
    p.set_defaults(preset=None, config=None, set=None)

    p = sub.add_parser("replay", help="re-run a manifest.json")
    p.add_argument("manifest")
    p.add_argument("--out", help="output directory (default: the manifest's directory)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            path = Path(args.manifest)
            try:
                resolved = json.loads(path.read_text(encoding="utf-8"))["config"]
            except (OSError, ValueError, KeyError) as exc:
                raise CliError(f"cannot read manifest {str(path)!r}: {exc}") from None
            out = Path(args.out) if args.out else path.parent
        else:
            resolved = resolve(args.command, args)
            out = Path(args.out)
        execute(resolved, out)
    except CliError as exc:
        print(f"uca-mimo: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DetectorCapError as exc:
        print(f"uca-mimo: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"uca-mimo: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
