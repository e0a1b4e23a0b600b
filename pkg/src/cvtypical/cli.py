"""Command-line entry point.

Subcommands:
    moments           exact ensemble moments for a deterministic profile (JSON)
    concentration     sweep ensembles over a list of n (CSV per n + JSON summary)
    weingarten-check  compare the character-sum values against the Gram oracle
    profile-sample    draw squeezing spectra from a profile (CSV or JSON)
    trial-dump        run one ensemble and emit its trials (CSV) and summary (JSON)

A flat JSON config file can hold any field; explicit flags override it.
Outputs are deterministic given (seed, config): files are written atomically,
floats serialize via repr, and every file carries a one-line provenance
header with the version, seed, and a config digest.  Entropies are in nats.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .errors import (
    CvTypicalError,
    DomainError,
    EnergyTooSmall,
    InvalidSpec,
    UsageError,
)
from .haar import SeededStream
from .harness import (
    concentration_sweep,
    format_trials_csv,
    run_ensemble,
    summary_to_jsonable,
    write_summary_json,
    write_trials_csv,
    _atomic_write_text,
)
from .moments import compute_moment_report, moment_inputs_from_spectrum
from .moments import average_energy_exact
from .profiles import ProfileSpec, ScalingConfig, parse_profile, profile_to_string
from .profiles import sample_profile
from .weingarten import gram_weingarten_oracle, partitions, weingarten

WORKERS_ENV_VAR = "CVTYPICAL_WORKERS"

SUBCOMMANDS = (
    "moments",
    "concentration",
    "weingarten-check",
    "profile-sample",
    "trial-dump",
)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    seed: int = 0
    workers: int = 1
    n: int | None = None
    k: int | None = None
    samples: int | None = None
    z_profile: ProfileSpec | None = None
    scaling: ScalingConfig | None = None
    output_path: str | None = None
    format: str = "csv"
    n_list: tuple | None = None
    p: int | None = None
    n_range: tuple | None = None
    output_dir: str = "."
    summary_output: str | None = None
    base_profile: str = "constant"


# Which config-file keys each subcommand accepts, beyond the shared ones.
_SHARED_KEYS = {"subcommand", "seed", "workers"}
_KEYS_BY_SUBCOMMAND = {
    "moments": {"n", "k", "z_profile", "output_path"},
    "concentration": {
        "n_list",
        "k",
        "samples",
        "scaling",
        "output_dir",
        "base_profile",
    },
    "weingarten-check": {"p", "n_range"},
    "profile-sample": {"n", "samples", "z_profile", "output_path", "format"},
    "trial-dump": {
        "n",
        "k",
        "samples",
        "z_profile",
        "output_path",
        "summary_output",
    },
}

_SCALING_KEYS = ("zeta", "kappa", "scale_z", "scale_k")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvtypical",
        description="Typicality experiments for random pure Gaussian states.",
    )
    parser.add_argument("--version", action="version", version=f"cvtypical {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--config", help="flat JSON config file; flags override it")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument(
            "--workers",
            type=int,
            default=None,
            help=f"worker processes (default ${WORKERS_ENV_VAR} or 1)",
        )

    sp = subs.add_parser("moments", help="exact moment formulas for one profile")
    common(sp)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--z-profile", default=None, help="fixed:<csv> or constant:<z>x<n>")
    sp.add_argument("--output", default=None, help="JSON file (default: stdout)")

    sp = subs.add_parser("concentration", help="ensemble sweep over a list of n")
    common(sp)
    sp.add_argument("--n-list", default=None, help="comma-separated mode counts")
    sp.add_argument("--k", type=int, default=None, help="fixed k (default: scaling rule)")
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--zeta", type=float, default=None, help="squeezing growth exponent")
    sp.add_argument("--kappa", type=float, default=None, help="subsystem growth exponent")
    sp.add_argument("--scale-z", type=float, default=None, help="squeezing prefactor")
    sp.add_argument("--scale-k", type=float, default=None, help="subsystem prefactor")
    sp.add_argument("--output-dir", default=None)
    sp.add_argument(
        "--base-profile",
        default=None,
        choices=("constant", "vacuum"),
        help="spectrum family used at each n",
    )

    sp = subs.add_parser("weingarten-check", help="character sum vs Gram-matrix oracle")
    common(sp)
    sp.add_argument("--p", type=int, default=None, help="moment order")
    sp.add_argument("--n-range", default=None, help="inclusive range a:b of dimensions")

    sp = subs.add_parser("profile-sample", help="draw squeezing spectra")
    common(sp)
    sp.add_argument("--z-profile", default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--output", default=None, help="file (default: stdout)")
    sp.add_argument("--format", default=None, choices=("csv", "json"))

    sp = subs.add_parser("trial-dump", help="run an ensemble, dump trials + summary")
    common(sp)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--z-profile", default=None)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--output", default=None, help="trial CSV (default: stdout)")
    sp.add_argument(
        "--summary-output",
        default=None,
        help="summary JSON file (default: stdout when --output is a file)",
    )
    return parser


def _load_config_file(path: str) -> dict:
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    return data


def _require_int(value, field: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise UsageError(f"--{field.replace('_', '-')} must be an integer, got {value!r}")
    if value < minimum:
        raise UsageError(f"--{field.replace('_', '-')} must be >= {minimum}, got {value}")
    return value


def _parse_n_list(value) -> tuple:
    if isinstance(value, (list, tuple)):
        items = list(value)
    elif isinstance(value, str):
        items = [part.strip() for part in value.split(",") if part.strip()]
    else:
        raise UsageError(f"--n-list must be a comma list of integers, got {value!r}")
    try:
        ns = tuple(int(x) for x in items)
    except (TypeError, ValueError):
        raise UsageError(f"--n-list must be a comma list of integers, got {value!r}") from None
    if not ns:
        raise UsageError("--n-list is empty")
    return ns


def _parse_n_range(value) -> tuple:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        lo, hi = value
    elif isinstance(value, str) and value.count(":") == 1:
        lo, hi = value.split(":")
    else:
        raise UsageError(f"--n-range must look like a:b, got {value!r}")
    try:
        lo, hi = int(lo), int(hi)
    except (TypeError, ValueError):
        raise UsageError(f"--n-range must hold integers, got {value!r}") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"--n-range needs 1 <= a <= b, got {lo}:{hi}")
    return lo, hi


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw is None:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise UsageError(f"${WORKERS_ENV_VAR} must be an integer, got {raw!r}") from None
    if workers < 1:
        raise UsageError(f"${WORKERS_ENV_VAR} must be >= 1, got {workers}")
    return workers


def parse_config(argv, config_file: str | None = None) -> RunConfig:
    """Merge argv and an optional flat JSON config file into a RunConfig.

    Precedence: explicit flag, then config-file key, then default.  Unknown
    config keys and cross-field inconsistencies raise UsageError.
    """
    ns = _build_parser().parse_args(argv)
    sub = ns.subcommand

    path = config_file or ns.config
    file_cfg = _load_config_file(path) if path else {}
    allowed = _SHARED_KEYS | _KEYS_BY_SUBCOMMAND[sub]
    for key in file_cfg:
        if key not in allowed:
            raise UsageError(f"config key {key!r} is not valid for subcommand {sub!r}")
    if "subcommand" in file_cfg and file_cfg["subcommand"] != sub:
        raise UsageError(
            f"config file names subcommand {file_cfg['subcommand']!r} but {sub!r} was invoked"
        )

    def pick(flag_name: str, file_key: str | None = None, default=None):
        value = getattr(ns, flag_name, None)
        if value is not None:
            return value
        key = file_key or flag_name
        if key in file_cfg and file_cfg[key] is not None:
            return file_cfg[key]
        return default

    seed = pick("seed", default=0)
    seed = _require_int(seed, "seed", 0)
    workers = pick("workers")
    workers = _default_workers() if workers is None else _require_int(workers, "workers", 1)

    n = pick("n")
    if n is not None:
        n = _require_int(n, "n", 1)
    k = pick("k")
    if k is not None:
        k = _require_int(k, "k", 1)
    samples = pick("samples")
    if samples is not None:
        samples = _require_int(samples, "samples", 1)

    profile = None
    profile_text = pick("z_profile")
    if profile_text is not None:
        if not isinstance(profile_text, str):
            raise UsageError(f"--z-profile must be a string, got {profile_text!r}")
        profile = parse_profile(profile_text, n=n)

    scaling = None
    if sub == "concentration":
        file_scaling = file_cfg.get("scaling", {})
        if file_scaling is None:
            file_scaling = {}
        if not isinstance(file_scaling, dict):
            raise UsageError("config key 'scaling' must be an object")
        for key in file_scaling:
            if key not in _SCALING_KEYS:
                raise UsageError(f"unknown scaling key {key!r}")
        merged = {
            "zeta": 0.0,
            "kappa": 0.0,
            "scale_z": 2.0,
            "scale_k": 1.0,
        }
        merged.update(file_scaling)
        for key in _SCALING_KEYS:
            flag_value = getattr(ns, key, None)
            if flag_value is not None:
                merged[key] = flag_value
        try:
            scaling = ScalingConfig(**{key: float(merged[key]) for key in _SCALING_KEYS})
        except (TypeError, ValueError):
            raise UsageError(f"scaling values must be numbers, got {merged!r}") from None
        except DomainError as exc:
            raise UsageError(f"bad scaling config: {exc}") from None

    cfg = RunConfig(
        subcommand=sub,
        seed=seed,
        workers=workers,
        n=n,
        k=k,
        samples=samples,
        z_profile=profile,
        scaling=scaling,
        output_path=pick("output", "output_path"),
        format=pick("format", default="csv"),
        n_list=_parse_n_list(pick("n_list")) if pick("n_list") is not None else None,
        p=_require_int(pick("p"), "p", 1) if pick("p") is not None else None,
        n_range=_parse_n_range(pick("n_range")) if pick("n_range") is not None else None,
        output_dir=pick("output_dir", default="."),
        summary_output=pick("summary_output"),
        base_profile=pick("base_profile", default="constant"),
    )
    _validate_config(cfg)
    return cfg


def _require(cfg_value, flag: str, sub: str):
    if cfg_value is None:
        raise UsageError(f"subcommand {sub!r} needs --{flag}")
    return cfg_value


def _validate_config(cfg: RunConfig) -> None:
    sub = cfg.subcommand
    if sub == "moments":
        _require(cfg.k, "k", sub)
        _require(cfg.z_profile, "z-profile", sub)
        if not cfg.z_profile.is_deterministic:
            raise UsageError(
                "moments needs a deterministic profile (fixed:... or constant:...)"
            )
        if cfg.k > cfg.z_profile.n:
            raise UsageError(f"--k {cfg.k} exceeds the profile's n={cfg.z_profile.n}")
    elif sub == "concentration":
        _require(cfg.n_list, "n-list", sub)
        _require(cfg.samples, "samples", sub)
    elif sub == "weingarten-check":
        _require(cfg.p, "p", sub)
        _require(cfg.n_range, "n-range", sub)
    elif sub == "profile-sample":
        _require(cfg.z_profile, "z-profile", sub)
        _require(cfg.samples, "samples", sub)
    elif sub == "trial-dump":
        _require(cfg.k, "k", sub)
        _require(cfg.z_profile, "z-profile", sub)
        _require(cfg.samples, "samples", sub)
        if cfg.k > cfg.z_profile.n:
            raise UsageError(f"--k {cfg.k} exceeds the profile's n={cfg.z_profile.n}")


def config_digest(cfg: RunConfig) -> str:
    """Digest of the semantic fields only: worker count and output locations
    must not change results, so they stay out of the hash."""
    semantic = {
        "subcommand": cfg.subcommand,
        "seed": cfg.seed,
        "n": cfg.n,
        "k": cfg.k,
        "samples": cfg.samples,
        "z_profile": profile_to_string(cfg.z_profile) if cfg.z_profile else None,
        "scaling": [cfg.scaling.zeta, cfg.scaling.kappa, cfg.scaling.scale_z, cfg.scaling.scale_k]
        if cfg.scaling
        else None,
        "p": cfg.p,
        "n_range": list(cfg.n_range) if cfg.n_range else None,
        "n_list": list(cfg.n_list) if cfg.n_list else None,
        "base_profile": cfg.base_profile,
        "format": cfg.format,
    }
    semantic = {key: val for key, val in semantic.items() if val is not None}
    blob = json.dumps(semantic, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _provenance_line(cfg: RunConfig) -> str:
    return (
        f"cvtypical {__version__} seed={cfg.seed} "
        f"config=sha256:{config_digest(cfg)} unit=nats"
    )


def _provenance_dict(cfg: RunConfig) -> dict:
    return {
        "version": __version__,
        "seed": cfg.seed,
        "config_sha256": config_digest(cfg),
        "entropy_unit": "nats",
    }


def _emit_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        _atomic_write_text(path, text)


def _run_moments(cfg: RunConfig) -> int:
    z = cfg.z_profile.fixed_spectrum()
    report = compute_moment_report(z, cfg.k)
    mi = moment_inputs_from_spectrum(z, cfg.k)
    payload = {
        "provenance": _provenance_dict(cfg),
        "n": cfg.z_profile.n,
        "k": cfg.k,
        "z_profile": profile_to_string(cfg.z_profile),
        "lambda_bar": float(average_energy_exact(mi)),
        "tilde_lambda_sq": report.tilde_lambda_sq,
        "second_moment": report.second_moment,
        "fourth_moment": report.fourth_moment,
        "expected_f": report.expected_f,
    }
    _emit_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg.output_path)
    return 0


def _run_concentration(cfg: RunConfig) -> int:
    os.makedirs(cfg.output_dir, exist_ok=True)
    provenance_line = _provenance_line(cfg)
    written = []

    def sink(n, summary, records):
        path = os.path.join(cfg.output_dir, f"trials_n{n}.csv")
        write_trials_csv(path, records, provenance_line)
        written.append(path)

    k_rule = (lambda n: cfg.k) if cfg.k is not None else None
    results = concentration_sweep(
        cfg.scaling,
        cfg.n_list,
        cfg.samples,
        cfg.seed,
        k_rule=k_rule,
        base_profile=cfg.base_profile,
        workers=cfg.workers,
        record_sink=sink,
    )
    payload = {
        "provenance": _provenance_dict(cfg),
        "rows": [summary_to_jsonable(summary) for _n, summary in results],
    }
    summary_path = os.path.join(cfg.output_dir, "sweep_summary.json")
    _atomic_write_text(summary_path, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    written.append(summary_path)
    for path in written:
        print(f"wrote {path}")
    return 0


def _run_weingarten_check(cfg: RunConfig) -> int:
    lo, hi = cfg.n_range
    lines = ["# " + _provenance_line(cfg), "n,cycle_type,character_sum,gram_oracle,delta"]
    mismatches = 0
    for n in range(lo, hi + 1):
        oracle = gram_weingarten_oracle(n, cfg.p)
        for ct in partitions(cfg.p):
            wg = weingarten(n, ct)
            delta = wg - oracle[ct]
            if delta != 0:
                mismatches += 1
            ct_text = "+".join(str(part) for part in ct)
            lines.append(f"{n},{ct_text},{wg},{oracle[ct]},{delta}")
    sys.stdout.write("\n".join(lines) + "\n")
    if mismatches:
        print(f"error: {mismatches} Weingarten values disagree", file=sys.stderr)
        return 1
    return 0


def _run_profile_sample(cfg: RunConfig) -> int:
    spec = cfg.z_profile
    spectra = [
        sample_profile(spec, SeededStream(cfg.seed, i)) for i in range(cfg.samples)
    ]
    if cfg.format == "json":
        payload = {
            "provenance": _provenance_dict(cfg),
            "n": spec.n,
            "z_profile": profile_to_string(spec),
            "spectra": [[float(z) for z in zs] for zs in spectra],
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        header = "sample_id," + ",".join(f"z_{j}" for j in range(1, spec.n + 1))
        lines = ["# " + _provenance_line(cfg), header]
        for i, zs in enumerate(spectra):
            lines.append(",".join([str(i)] + [repr(float(z)) for z in zs]))
        text = "\n".join(lines) + "\n"
    _emit_text(text, cfg.output_path)
    return 0


def _run_trial_dump(cfg: RunConfig) -> int:
    summary, records = run_ensemble(
        cfg.z_profile, cfg.k, cfg.samples, cfg.seed, workers=cfg.workers
    )
    csv_text = format_trials_csv(records, _provenance_line(cfg))
    _emit_text(csv_text, cfg.output_path)
    summary_payload = summary_to_jsonable(summary, _provenance_dict(cfg))
    summary_text = json.dumps(summary_payload, indent=2, sort_keys=True) + "\n"
    if cfg.summary_output is not None:
        _atomic_write_text(cfg.summary_output, summary_text)
    elif cfg.output_path is not None:
        sys.stdout.write(summary_text)
    return 0


def execute(cfg: RunConfig) -> int:
    """Dispatch a validated config; returns the process exit code."""
    if cfg.subcommand == "moments":
        return _run_moments(cfg)
    if cfg.subcommand == "concentration":
        return _run_concentration(cfg)
    if cfg.subcommand == "weingarten-check":
        return _run_weingarten_check(cfg)
    if cfg.subcommand == "profile-sample":
        return _run_profile_sample(cfg)
    if cfg.subcommand == "trial-dump":
        return _run_trial_dump(cfg)
    raise UsageError(f"unknown subcommand {cfg.subcommand!r}")


def main(argv=None) -> int:
    """Console entry point.  Exit codes: 0 success, 1 computational failure,
    2 configuration or usage problem."""
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return execute(cfg)
    except (UsageError, InvalidSpec, EnergyTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CvTypicalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
