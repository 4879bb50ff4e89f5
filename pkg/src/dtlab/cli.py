"""Command line interface.

Each subcommand resolves its configuration as defaults <- --config file <-
explicit flags, runs deterministically from the recorded seed, and emits a
JSON report (stdout, or report.json under --out together with trials.csv and
manifest.json). The manifest carries the fully resolved config; `dtlab replay
manifest.json` re-runs the command and byte-compares the stored report.

Exit codes: 0 pass, 1 a declared pass criterion failed, 2 configuration
error, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .bpoly import BElem
from .brown_hs import (
    INVARIANCE_TOL,
    Region,
    brown_empirical,
    check_lattice,
    hs_projection,
    sot_qn_decay,
)
from .cumulants import is_balanced, moment, scalar_moment
from .errors import ConfigError, DTLabError, NumericalAbortError
from .experiments import (
    AngleExperimentConfig,
    ConcentrationFamilyConfig,
    all_words,
    coeff_word_norm_check,
    compression_angle_check,
    concentration_ratios,
    diagonal_power_floor_check,
    quantile_radial_atoms,
    restriction_model_check,
    run_angle_experiment,
    run_concentration_ladder,
    run_power_trace_floor,
    semicircle_trace_mc,
    word_trace_mc,
)
from .matrix_lab import RadialMeasure, build_dt, op_norm
from .pairings import pairing_oracle


@dataclass
class CommandResult:
    report: dict
    rows: list[dict]
    passed: bool
    figure_jobs: list[tuple[str, Callable[[Path], Path]]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# defaults and config resolution
# ---------------------------------------------------------------------------

_MU_TWO = [{"radius": 1.0, "weight": 0.5}, {"radius": 2.0, "weight": 0.5}]


def _balanced_words(max_len: int) -> list[str]:
    return [w for w in all_words(max_len) if is_balanced(w)]


def _defaults(command: str, experiment: str | None = None) -> dict:
    if command == "moment":
        return {"word": None, "coeffs": None, "grid_size": 201}
    if command == "oracle":
        return {"word": None, "compare": True}
    if command == "simulate":
        return {
            "kind": "words",
            "n": 128,
            "trials": 40,
            "seed": 0,
            "words": None,
            "k_max": 4,
            "weights": [0.5, 0.5],
        }
    if command == "hs":
        return {
            "measure": list(_MU_TWO),
            "c": 1.0,
            "n": 64,
            "trials": 1,
            "seed": 0,
            "regions": [
                Region.annulus(0.0, 1.5).to_json_obj(),
                Region.annulus(1.5, 3.5).to_json_obj(),
            ],
            "lattice": True,
            "decay_powers": 8,
        }
    if command == "angle":
        table = {
            "two-cluster": {
                "r": 1.0,
                "r_prime": 1.05,
                "s_prime": 1.9,
                "s": 2.0,
                "t": 0.5,
                "c": 1.0,
                "n": 256,
                "k": 40,
                "trials": 20,
                "seed": 0,
                "residual_cap": None,
            },
            "power-floor": {
                "measure": list(_MU_TWO),
                "c": 1.0,
                "n": 256,
                "r": 1.0,
                "s": 2.0,
                "k_max": 5,
                "trials": 40,
                "seed": 0,
            },
            "diag-floor": {
                "f": ["1", "1/2"],
                "c": 1.0,
                "n": 128,
                "n_max": 3,
                "trials": 20,
                "seed": 0,
            },
            "word-norm": {
                "word": "*1*1",
                "coeffs": [["1", "1"], ["1"], ["1", "-1/2"], ["2"]],
                "n": 128,
                "trials": 20,
                "seed": 0,
            },
            "compression": {
                "measure": [
                    {"radius": 0.5, "weight": 0.4},
                    {"radius": 1.5, "weight": 0.3},
                    {"radius": 2.5, "weight": 0.3},
                ],
                "c": 0.5,
                "n": 96,
                "b_region": Region.annulus(1.0, 3.5).to_json_obj(),
                "c_region": Region.annulus(0.0, 2.0).to_json_obj(),
                "trials": 5,
                "seed": 0,
            },
            "restriction": {
                "measure": list(_MU_TWO),
                "c": 1.0,
                "b_region": Region.annulus(1.5, 3.0).to_json_obj(),
                "n": 128,
                "trials": 10,
                "seed": 0,
                "max_word_len": 4,
            },
        }
        if experiment not in table:
            raise ConfigError(
                "cli.config",
                f"unknown experiment {experiment!r}; choose from {sorted(table)}",
            )
        return {"experiment": experiment, **table[experiment]}
    if command == "concentration":
        return {
            "a": 1.0,
            "b": 1.5,
            "n_max": 64,
            "c": 1.0,
            "n": 256,
            "trials": 0,
            "seed": 0,
            "density_check": True,
            "density_power": 0.5,
            "density_atoms": 200,
            "density_deltas": [0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001],
        }
    raise ConfigError("cli.config", f"unknown command {command!r}")


# flags that may overlay config keys, per command: argparse dest -> config key
_FLAG_MAP: dict[str, dict[str, str]] = {
    "moment": {"word": "word", "coeffs": "coeffs", "grid_size": "grid_size"},
    "oracle": {"word": "word", "compare": "compare"},
    "simulate": {
        "seed": "seed",
        "n": "n",
        "trials": "trials",
        "kind": "kind",
        "words": "words",
        "k_max": "k_max",
        "weights": "weights",
    },
    "hs": {"seed": "seed", "n": "n", "trials": "trials", "c": "c"},
    "angle": {"seed": "seed", "n": "n", "trials": "trials", "c": "c", "k": "k"},
    "concentration": {
        "seed": "seed",
        "n": "n",
        "trials": "trials",
        "c": "c",
        "a": "a",
        "b": "b",
        "n_max": "n_max",
    },
}


def _load_config_file(path: str) -> dict:
    try:
        obj = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError("cli.config", f"cannot read config {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError("cli.config", f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigError("cli.config", f"config {path} must hold a JSON object")
    return obj


def resolve_config(command: str, args: argparse.Namespace) -> dict:
    file_cfg = _load_config_file(args.config) if getattr(args, "config", None) else {}
    experiment = None
    if command == "angle":
        experiment = (
            getattr(args, "experiment", None)
            or file_cfg.get("experiment")
            or "two-cluster"
        )
    cfg = _defaults(command, experiment)
    unknown = set(file_cfg) - set(cfg)
    if unknown:
        raise ConfigError(
            "cli.config", f"unknown config keys for {command}: {sorted(unknown)}"
        )
    cfg.update(file_cfg)
    if experiment is not None:
        cfg["experiment"] = experiment
    for dest, key in _FLAG_MAP.get(command, {}).items():
        value = getattr(args, dest, None)
        if value is None:
            continue
        if key not in cfg:
            raise ConfigError(
                "cli.config", f"flag --{dest.replace('_', '-')} does not apply here"
            )
        cfg[key] = value
    if command in ("moment", "oracle") and cfg.get("word") is None:
        raise ConfigError("cli.config", "a word over {1,*} is required")
    if command == "simulate" and cfg.get("words") is None:
        cfg["words"] = _balanced_words(4)
    return cfg


# ---------------------------------------------------------------------------
# runners: resolved config dict -> CommandResult
# ---------------------------------------------------------------------------


def _belem_of(obj) -> BElem:
    from .bpoly import from_json_obj

    if isinstance(obj, str):
        obj = [obj]
    return from_json_obj(obj)


def _run_moment(cfg: dict) -> CommandResult:
    from .bpoly import to_json_obj as belem_json
    from .bpoly import trace as b_trace
    from .cumulants import CoeffWord

    word = cfg["word"]
    if cfg["coeffs"] is None:
        m = moment(word)
        coeff_desc = None
    else:
        coeffs = tuple(_belem_of(c) for c in cfg["coeffs"])
        m = moment(CoeffWord(word, coeffs))
        coeff_desc = [belem_json(c) for c in coeffs]
    report = {
        "word": word,
        "balanced": is_balanced(word),
        "coeffs": coeff_desc,
        "moment": belem_json(m),
        "trace": str(b_trace(m)),
    }
    rows = [{"k": i, "coefficient": s} for i, s in enumerate(belem_json(m))] or [
        {"k": 0, "coefficient": "0"}
    ]

    def render(path: Path) -> Path:
        from .figures import render_moment_figure

        return render_moment_figure([(word or "empty word", m)], path, cfg["grid_size"])

    return CommandResult(report, rows, True, [("moment", render)])


def _run_oracle(cfg: dict) -> CommandResult:
    word = cfg["word"]
    value = pairing_oracle(word)
    report: dict = {"word": word, "value": str(value)}
    passed = True
    if cfg["compare"]:
        engine = scalar_moment(word)
        report["engine"] = str(engine)
        report["match"] = engine == value
        passed = bool(report["match"])
    rows = [{"word": word, "value": str(value)}]
    return CommandResult(report, rows, passed)


def _run_simulate(cfg: dict) -> CommandResult:
    kind = cfg["kind"]
    if kind == "words":
        rep = word_trace_mc(list(cfg["words"]), cfg["n"], cfg["trials"], cfg["seed"])
    elif kind == "semicircle":
        rep = semicircle_trace_mc(cfg["n"], cfg["trials"], cfg["seed"], cfg["k_max"])
    elif kind == "mix":
        rep = semicircle_trace_mc(
            cfg["n"], cfg["trials"], cfg["seed"], cfg["k_max"], cfg["weights"]
        )
    else:
        raise ConfigError(
            "cli.config", f"kind must be words|semicircle|mix, got {kind!r}"
        )
    report = {**rep.to_json_obj(), "kind": kind}

    def render(path: Path) -> Path:
        from .figures import render_mc_figure

        return render_mc_figure(rep, path)

    return CommandResult(report, rep.trial_rows(), rep.passed, [("simulate", render)])


def _run_hs(cfg: dict) -> CommandResult:
    mu = RadialMeasure.from_json_obj(cfg["measure"])
    regions = [Region.from_json_obj(o) for o in cfg["regions"]]
    if not regions:
        raise ConfigError("cli.config", "at least one region is required")
    if cfg["trials"] < 1:
        raise ConfigError("cli.config", "trials must be >= 1")
    rows: list[dict] = []
    worst_invariance = 0.0
    lattice_obj = None
    ok = True
    last_model = None
    seeds = np.random.SeedSequence(int(cfg["seed"])).spawn(cfg["trials"])
    for trial, ss in enumerate(seeds):
        model = build_dt(mu, cfg["c"], cfg["n"], ss)
        last_model = model
        ev = brown_empirical(model.Z)
        scale = max(1.0, op_norm(model.Z))
        for ridx, region in enumerate(regions):
            p = hs_projection(model.Z, region)
            count = sum(1 for z in ev if region.contains(complex(z)))
            resid = op_norm((np.eye(model.N) - p.P) @ model.Z @ p.P)
            worst_invariance = max(worst_invariance, resid / scale)
            ok = ok and p.rank == count and resid <= INVARIANCE_TOL * scale
            rows.append(
                {
                    "trial": trial,
                    "region": ridx,
                    "rank": p.rank,
                    "eigenvalue_count": count,
                    "invariance_residual": float(resid),
                }
            )
        if cfg["lattice"] and len(regions) >= 2:
            lat = check_lattice(model.Z, regions[0], regions[1])
            lattice_obj = {
                "union_distance": lat.union_distance,
                "intersect_distance": lat.intersect_distance,
                "rank_b1": lat.rank_b1,
                "rank_b2": lat.rank_b2,
                "rank_union": lat.rank_union,
                "rank_intersect": lat.rank_intersect,
                "passed": lat.passed,
            }
            ok = ok and lat.passed
    decay = sot_qn_decay(cfg["c"] * last_model.T, cfg["decay_powers"])
    report = {
        "n": cfg["n"],
        "c": cfg["c"],
        "trials": cfg["trials"],
        "regions": [r.to_json_obj() for r in regions],
        "worst_invariance_rel": float(worst_invariance),
        "lattice": lattice_obj,
        "sot_decay": [float(v) for v in decay],
        "passed": bool(ok),
    }

    ev_last = brown_empirical(last_model.Z)

    def render(path: Path) -> Path:
        from .figures import render_spectrum_figure

        named = [(f"region {i}", r) for i, r in enumerate(regions)]
        return render_spectrum_figure(ev_last, named, path)

    return CommandResult(report, rows, bool(ok), [("spectrum", render)])


def _run_angle(cfg: dict) -> CommandResult:
    exp = cfg["experiment"]
    if exp == "two-cluster":
        rep = run_angle_experiment(
            AngleExperimentConfig(
                r=cfg["r"],
                r_prime=cfg["r_prime"],
                s_prime=cfg["s_prime"],
                s=cfg["s"],
                t=cfg["t"],
                c=cfg["c"],
                N=cfg["n"],
                K=cfg["k"],
                trials=cfg["trials"],
                seed=cfg["seed"],
                residual_cap=cfg["residual_cap"],
            )
        )
        report = {"experiment": exp, **rep.to_json_obj()}

        def render(path: Path) -> Path:
            from .figures import render_angle_figure

            return render_angle_figure(rep, path)

        return CommandResult(report, rep.trial_rows(), rep.passed, [("angle", render)])
    if exp == "power-floor":
        rep = run_power_trace_floor(
            RadialMeasure.from_json_obj(cfg["measure"]),
            cfg["c"],
            cfg["n"],
            cfg["r"],
            cfg["s"],
            cfg["k_max"],
            cfg["trials"],
            cfg["seed"],
        )
    elif exp == "diag-floor":
        rep = diagonal_power_floor_check(
            _belem_of(cfg["f"]), cfg["c"], cfg["n"], cfg["n_max"], cfg["trials"], cfg["seed"]
        )
    elif exp == "word-norm":
        rep = coeff_word_norm_check(
            cfg["word"],
            [_belem_of(c) for c in cfg["coeffs"]],
            cfg["n"],
            cfg["trials"],
            cfg["seed"],
        )
    elif exp == "compression":
        return _run_compression(cfg)
    elif exp == "restriction":
        rep = restriction_model_check(
            RadialMeasure.from_json_obj(cfg["measure"]),
            cfg["c"],
            Region.from_json_obj(cfg["b_region"]),
            cfg["n"],
            cfg["trials"],
            cfg["seed"],
            cfg["max_word_len"],
        )
    else:  # pragma: no cover - resolve_config already validated
        raise ConfigError("cli.config", f"unknown experiment {exp!r}")
    return CommandResult({"experiment": exp, **rep.to_json_obj()}, rep.trial_rows(), rep.passed)


def _run_compression(cfg: dict) -> CommandResult:
    mu = RadialMeasure.from_json_obj(cfg["measure"])
    b_region = Region.from_json_obj(cfg["b_region"])
    c_region = Region.from_json_obj(cfg["c_region"])
    rows = []
    ok = True
    for trial, ss in enumerate(np.random.SeedSequence(int(cfg["seed"])).spawn(cfg["trials"])):
        model = build_dt(mu, cfg["c"], cfg["n"], ss)
        rep = compression_angle_check(model.Z, b_region, c_region)
        ok = ok and rep.passed
        rows.append(
            {
                "trial": trial,
                "cos_compressed": rep.cos_compressed,
                "cos_full": rep.cos_full,
                "passed": rep.passed,
            }
        )
    report = {
        "experiment": "compression",
        "n": cfg["n"],
        "trials": cfg["trials"],
        "b_region": cfg["b_region"],
        "c_region": cfg["c_region"],
        "cos_compressed_mean": math.fsum(r["cos_compressed"] for r in rows) / len(rows),
        "cos_full_mean": math.fsum(r["cos_full"] for r in rows) / len(rows),
        "passed": bool(ok),
    }
    return CommandResult(report, rows, bool(ok))


def _run_concentration(cfg: dict) -> CommandResult:
    rep = run_concentration_ladder(
        ConcentrationFamilyConfig(
            a=cfg["a"],
            b=cfg["b"],
            n_max=cfg["n_max"],
            c=cfg["c"],
            N=cfg["n"],
            trials=cfg["trials"],
            seed=cfg["seed"],
        )
    )
    report = rep.to_json_obj()
    passed = rep.passed
    if cfg["density_check"]:
        mu = quantile_radial_atoms(cfg["density_power"], cfg["density_atoms"])
        ratios = concentration_ratios(mu, 0.0, cfg["density_deltas"])
        increasing = all(b > a for a, b in zip(ratios, ratios[1:]))
        diverging = increasing and ratios[-1] >= 2.0 * ratios[0]
        report["density_check"] = {
            "power": cfg["density_power"],
            "atoms": cfg["density_atoms"],
            "deltas": list(cfg["density_deltas"]),
            "ratios": [float(v) for v in ratios],
            "diverging": bool(diverging),
        }
        passed = passed and diverging

    def render(path: Path) -> Path:
        from .figures import render_concentration_figure

        return render_concentration_figure(rep, path)

    return CommandResult(report, rep.trial_rows(), bool(passed), [("concentration", render)])


_RUNNERS: dict[str, Callable[[dict], CommandResult]] = {
    "moment": _run_moment,
    "oracle": _run_oracle,
    "simulate": _run_simulate,
    "hs": _run_hs,
    "angle": _run_angle,
    "concentration": _run_concentration,
}


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------


def _report_text(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _rows_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    keys = list(rows[0])
    for r in rows[1:]:
        for k in r:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _manifest(command: str, cfg: dict, outputs: dict) -> dict:
    return {
        "command": command,
        "config": cfg,
        "seed_scheme": {
            "scheme": "numpy-seedsequence-spawn",
            "root": cfg.get("seed"),
            "trials": cfg.get("trials"),
        },
        "artifact_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "outputs": outputs,
    }


def _emit(command: str, cfg: dict, result: CommandResult, args: argparse.Namespace) -> int:
    if getattr(args, "figures", False) and not getattr(args, "out", None):
        raise ConfigError("cli.config", "--figures requires --out")
    if getattr(args, "out", None):
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        outputs = {"report": "report.json", "rows": "trials.csv"}
        figure_paths = []
        if getattr(args, "figures", False):
            for name, job in result.figure_jobs:
                figure_paths.append(str(Path("figures") / f"{name}.png"))
                job(out / "figures" / f"{name}.png")
            outputs["figures"] = figure_paths
        (out / "report.json").write_text(_report_text(result.report))
        (out / "trials.csv").write_text(_rows_csv(result.rows))
        (out / "manifest.json").write_text(
            json.dumps(_manifest(command, cfg, outputs), indent=2, sort_keys=True) + "\n"
        )
        print(f"report: {out / 'report.json'}")
        print(f"rows: {out / 'trials.csv'}")
        print(f"manifest: {out / 'manifest.json'}")
        for rel in figure_paths:
            print(f"figure: {out / rel}")
        print(f"passed: {str(result.passed).lower()}")
    else:
        if args.format == "csv":
            sys.stdout.write(_rows_csv(result.rows))
        else:
            sys.stdout.write(_report_text(result.report))
        print(
            json.dumps(_manifest(command, cfg, {"report": "-", "rows": "-"}), sort_keys=True),
            file=sys.stderr,
        )
    return 0 if result.passed else 1


def _cmd_replay(args: argparse.Namespace) -> int:
    mpath = Path(args.manifest)
    try:
        manifest = json.loads(mpath.read_text())
    except OSError as exc:
        raise ConfigError("cli.replay", f"cannot read manifest: {exc}") from exc
    except ValueError as exc:
        raise ConfigError("cli.replay", f"manifest is not valid JSON: {exc}") from exc
    command = manifest.get("command")
    if command not in _RUNNERS:
        raise ConfigError("cli.replay", f"manifest names unknown command {command!r}")
    if manifest.get("artifact_version") != __version__:
        print(
            f"warning: manifest from version {manifest.get('artifact_version')}, "
            f"running {__version__}",
            file=sys.stderr,
        )
    result = _RUNNERS[command](manifest["config"])
    new_text = _report_text(result.report)
    report_rel = manifest.get("outputs", {}).get("report", "-")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(new_text)
        (out / "trials.csv").write_text(_rows_csv(result.rows))
    if report_rel == "-":
        sys.stdout.write(new_text)
        print("no stored report to compare against", file=sys.stderr)
        return 0 if result.passed else 1
    stored = (mpath.parent / report_rel).read_bytes()
    match = stored == new_text.encode()
    print(json.dumps({"command": command, "replay_match": match}, sort_keys=True))
    return 0 if match else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _comma_list(text: str) -> list[str]:
    return [part for part in text.split(",") if part != ""] if text else []


def _comma_floats(text: str) -> list[float]:
    return [float(part) for part in _comma_list(text)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtlab",
        description="Deterministic experiments for triangular-plus-diagonal operator models.",
    )
    parser.add_argument("--version", action="version", version=f"dtlab {__version__}")

    io_parent = argparse.ArgumentParser(add_help=False)
    io_parent.add_argument("--config", help="JSON config file overlaying the defaults")
    io_parent.add_argument("--out", help="directory for report.json, trials.csv, manifest.json")
    io_parent.add_argument(
        "--format", choices=("json", "csv"), default="json", help="stdout format without --out"
    )
    io_parent.add_argument(
        "--figures", action="store_true", help="also render PNG figures under OUT/figures"
    )

    mc_parent = argparse.ArgumentParser(add_help=False)
    mc_parent.add_argument("--seed", type=int, help="root seed (spawns per-trial seeds)")
    mc_parent.add_argument("--n", type=int, help="matrix size")
    mc_parent.add_argument("--trials", type=int, help="number of independent trials")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moment", parents=[io_parent], help="exact word expectation")
    p.add_argument("word", nargs="?", help="word over the alphabet {1,*}")
    p.add_argument("--coeffs", type=json.loads, help="JSON list of coefficient polynomials")
    p.add_argument("--grid-size", dest="grid_size", type=int, help="figure grid size")

    p = sub.add_parser("oracle", parents=[io_parent], help="pairing-sum value of a word")
    p.add_argument("word", nargs="?", help="word over the alphabet {1,*}")
    p.add_argument(
        "--no-compare",
        dest="compare",
        action="store_false",
        default=None,
        help="skip the engine equality check",
    )

    p = sub.add_parser(
        "simulate", parents=[io_parent, mc_parent], help="Monte-Carlo traces vs exact values"
    )
    p.add_argument("--kind", choices=("words", "semicircle", "mix"), help="what to sample")
    p.add_argument("--words", type=_comma_list, help="comma-separated words (kind=words)")
    p.add_argument("--k-max", dest="k_max", type=int, help="highest even moment (semicircle/mix)")
    p.add_argument("--weights", type=_comma_floats, help="block weights for kind=mix")

    p = sub.add_parser(
        "hs", parents=[io_parent, mc_parent], help="spectral subspace checks on a sampled model"
    )
    p.add_argument("--c", type=float, help="coupling strength")

    p = sub.add_parser(
        "angle", parents=[io_parent, mc_parent], help="experiment drivers for subspace angles"
    )
    p.add_argument(
        "--experiment",
        choices=(
            "two-cluster",
            "power-floor",
            "diag-floor",
            "word-norm",
            "compression",
            "restriction",
        ),
        help="which driver to run (default two-cluster)",
    )
    p.add_argument("--c", type=float, help="coupling strength")
    p.add_argument("--k", type=int, help="series truncation length (two-cluster)")

    p = sub.add_parser(
        "concentration",
        parents=[io_parent, mc_parent],
        help="analytic angle-bound ladder for a concentrating family",
    )
    p.add_argument("--a", type=float, help="concentration modulus")
    p.add_argument("--b", type=float, help="weight decay exponent, in (1,2)")
    p.add_argument("--n-max", dest="n_max", type=int, help="ladder cap / truncation")
    p.add_argument("--c", type=float, help="coupling strength")

    p = sub.add_parser("replay", help="re-run a manifest and byte-compare its report")
    p.add_argument("manifest", help="path to manifest.json from a previous run")
    p.add_argument("--out", help="also write the regenerated report/rows here")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "replay":
            return _cmd_replay(args)
        cfg = resolve_config(args.command, args)
        result = _RUNNERS[args.command](cfg)
        return _emit(args.command, cfg, result, args)
    except ConfigError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except NumericalAbortError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 3
    except DTLabError as exc:  # pragma: no cover - defensive
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
