"""Monte Carlo engine.

One trial: draw a squeezing spectrum, conjugate the fiducial covariance by a
Haar-random passive rotation, keep k modes, and record the reduced symplectic
spectrum, its entropy, the flatness functional f, and numerical-quality
diagnostics.  Ensembles run trials over independent counter-based streams
keyed by (seed, trial_id), so results are identical for any worker count,
and aggregate into a RunSummary.  CSV/JSON emission lives here too so the
formats stay pinned next to the records they serialize.
"""

from __future__ import annotations

import json
import math
import multiprocessing
import os
import tempfile
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DomainError, InvalidSubsystem, PairingFailure
from .haar import SeededStream, _as_generator, sample_haar_unitary
from .profiles import ProfileSpec, ScalingConfig, constant_profile, fixed_profile
from .profiles import sample_profile
from .symplectic import (
    average_energy,
    concentration_f,
    eta_embed,
    fiducial_covariance,
    gaussian_entropy,
    reduce_covariance,
    rotate_covariance,
    spectral_deviation_delta,
    symplectic_form,
    symplectic_spectrum,
)

# Exceedance thresholds are these multiples of lambda_bar**4; the natural
# scale of f is lambda_bar**4, so a fixed absolute ladder would go blind as
# the profile changes.
TAIL_LADDER_FACTORS = (0.01, 0.05, 0.1, 0.5, 1.0)

# A run fails outright when more than this fraction of trials flag
# PairingFailure; flagged trials are recorded, never dropped.
FLAG_BUDGET = 1e-3

F_IDENTITY_RTOL = 1e-8
PURITY_TOL = 1e-8

TRIAL_CSV_FIXED_COLUMNS = (
    "trial_id",
    "n",
    "k",
    "lambda_bar",
    "entropy",
    "f",
    "delta",
    "purity_residual",
)


@dataclass(frozen=True)
class TrialRecord:
    """One realized trial.

    f_value and delta satisfy f = 2*delta**2 up to roundoff; purity_residual
    is the largest deviation of the full-state symplectic spectrum from 1.
    tr_jm2/tr_jm4 are the raw trace powers feeding the moment comparisons.
    A flagged record means the eigenvalue pairing failed; its numeric fields
    are NaN and it never enters summary statistics.
    """

    trial_id: int
    n: int
    k: int
    lambda_bar: float
    symplectic_spectrum: tuple
    entropy: float
    f_value: float
    delta: float
    purity_residual: float
    tr_jm2: float
    tr_jm4: float
    flagged: bool = False


@dataclass(frozen=True)
class RunSummary:
    """Aggregates over the unflagged trials of one ensemble.

    Standard errors are sample standard deviation (ddof=1) over sqrt(count).
    tail_counts maps a threshold eps to the fraction of trials whose squared
    spectral deviation delta**2 exceeds eps.  lambda_bar is the profile value
    for deterministic profiles and the mean per-trial value otherwise.
    """

    samples: int
    n: int
    k: int
    lambda_bar: float
    seed: int
    flagged: int
    mean_f: float
    se_f: float
    mean_tr_jm2: float
    se_tr_jm2: float
    mean_tr_jm4: float
    se_tr_jm4: float
    mean_entropy: float
    se_entropy: float
    std_entropy: float
    tail_counts: dict


def run_trial(z, k: int, rng, trial_id: int = 0) -> TrialRecord:
    """Run the full pipeline once and record everything.

    A PairingFailure from either the full or the reduced spectrum yields a
    flagged record with NaN fields rather than an exception, so downstream
    tallies see every trial.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    n = z.size
    if not 1 <= k <= n:
        raise InvalidSubsystem(f"k={k} outside 1..{n}")
    gen = _as_generator(rng)
    lam_bar = average_energy(z)
    U = sample_haar_unitary(n, gen)
    M = rotate_covariance(fiducial_covariance(z), eta_embed(U))
    try:
        full = symplectic_spectrum(M)
        purity_residual = float(np.max(np.abs(full.lambdas - 1.0)))
        M_red = reduce_covariance(M, k)
        reduced = symplectic_spectrum(M_red)
    except PairingFailure:
        nan = float("nan")
        return TrialRecord(
            trial_id=trial_id,
            n=n,
            k=k,
            lambda_bar=lam_bar,
            symplectic_spectrum=(nan,) * k,
            entropy=nan,
            f_value=nan,
            delta=nan,
            purity_residual=nan,
            tr_jm2=nan,
            tr_jm4=nan,
            flagged=True,
        )
    jm = symplectic_form(k) @ M_red
    P = jm @ jm
    tr_jm2 = float(np.trace(P).real)
    tr_jm4 = float(np.trace(P @ P).real)
    c = lam_bar * lam_bar
    f_value = tr_jm4 + 2.0 * c * tr_jm2 + 2.0 * k * c * c
    return TrialRecord(
        trial_id=trial_id,
        n=n,
        k=k,
        lambda_bar=lam_bar,
        symplectic_spectrum=tuple(float(x) for x in reduced.lambdas),
        entropy=gaussian_entropy(reduced),
        f_value=f_value,
        delta=spectral_deviation_delta(reduced, lam_bar),
        purity_residual=purity_residual,
        tr_jm2=tr_jm2,
        tr_jm4=tr_jm4,
        flagged=False,
    )


def validate_trial_record(rec: TrialRecord) -> None:
    """Assert the per-record invariants (skipped for flagged records).

    The f = 2*delta**2 comparison floors the relative scale at 1: both sides
    vanish together near flat spectra through a cancellation the trace route
    resolves only to absolute roundoff, so a purely relative test would be
    vacuously strict there.
    """
    if rec.flagged:
        return
    two_delta_sq = 2.0 * rec.delta * rec.delta
    scale = max(1.0, abs(rec.f_value), two_delta_sq)
    if abs(rec.f_value - two_delta_sq) > F_IDENTITY_RTOL * scale:
        raise PairingFailure(
            f"trial {rec.trial_id}: f={rec.f_value!r} vs 2*delta^2={two_delta_sq!r}"
        )
    if not rec.purity_residual <= PURITY_TOL:
        raise PairingFailure(
            f"trial {rec.trial_id}: full state impure, residual={rec.purity_residual!r}"
        )


def _as_profile(profile) -> ProfileSpec:
    if isinstance(profile, ProfileSpec):
        return profile
    return fixed_profile(profile)


def _run_one(args) -> TrialRecord:
    spec, k, seed, trial_id = args
    gen = SeededStream(seed, trial_id).generator()
    # profile draws come off the same per-trial stream, before the unitary
    z = sample_profile(spec, gen)
    return run_trial(z, k, gen, trial_id=trial_id)


def _mean_se(values: np.ndarray) -> tuple:
    count = values.size
    if count == 0:
        return float("nan"), float("nan")
    mean = float(np.mean(values))
    if count < 2:
        return mean, float("nan")
    return mean, float(np.std(values, ddof=1) / math.sqrt(count))


def summarize_records(records, seed: int, profile: ProfileSpec | None = None) -> RunSummary:
    """Reduce a trial list to a RunSummary (order-insensitive aggregation)."""
    if not records:
        raise DomainError("cannot summarize an empty trial list")
    live = [r for r in records if not r.flagged]
    flagged = len(records) - len(live)
    first = records[0]
    if profile is not None and profile.is_deterministic:
        lambda_ref = average_energy(profile.fixed_spectrum())
    elif live:
        lambda_ref = float(np.mean([r.lambda_bar for r in live]))
    else:
        lambda_ref = float("nan")

    f_vals = np.array([r.f_value for r in live])
    tr2 = np.array([r.tr_jm2 for r in live])
    tr4 = np.array([r.tr_jm4 for r in live])
    entropy = np.array([r.entropy for r in live])
    delta_sq = np.array([r.delta * r.delta for r in live])

    mean_f, se_f = _mean_se(f_vals)
    mean_tr2, se_tr2 = _mean_se(tr2)
    mean_tr4, se_tr4 = _mean_se(tr4)
    mean_s, se_s = _mean_se(entropy)
    std_s = float(np.std(entropy, ddof=1)) if entropy.size >= 2 else float("nan")

    scale = lambda_ref ** 4
    tail_counts = {}
    for factor in TAIL_LADDER_FACTORS:
        eps = factor * scale
        tail_counts[eps] = float(np.mean(delta_sq > eps)) if live else float("nan")

    if live:
        fractions = [tail_counts[f * scale] for f in TAIL_LADDER_FACTORS]
        assert all(a >= b for a, b in zip(fractions, fractions[1:])), (
            "tail fractions must not increase with the threshold"
        )
        if math.isfinite(mean_f):
            for eps, q in tail_counts.items():
                if eps > 0.0:
                    # empirical Markov bound; cushion covers the two float
                    # routes to mean(delta^2), and the clamp covers vacuum
                    # runs where the trace route leaves mean_f at -1e-17
                    assert q <= (max(mean_f, 0.0) / (2.0 * eps)) * (1.0 + 1e-9) + 1e-15, (
                        f"tail fraction {q} at eps={eps} beats Markov"
                    )

    return RunSummary(
        samples=len(records),
        n=first.n,
        k=first.k,
        lambda_bar=lambda_ref,
        seed=seed,
        flagged=flagged,
        mean_f=mean_f,
        se_f=se_f,
        mean_tr_jm2=mean_tr2,
        se_tr_jm2=se_tr2,
        mean_tr_jm4=mean_tr4,
        se_tr_jm4=se_tr4,
        mean_entropy=mean_s,
        se_entropy=se_s,
        std_entropy=std_s,
        tail_counts=tail_counts,
    )


def run_ensemble(profile, k: int, samples: int, seed: int, workers: int = 1):
    """Run `samples` independent trials and aggregate.

    Returns (RunSummary, list of TrialRecord in trial_id order).  The trial
    stream for trial t is keyed (seed, t), so any worker count reproduces the
    same records bit for bit.  Raises PairingFailure when flagged trials
    exceed FLAG_BUDGET of the run.
    """
    spec = _as_profile(profile)
    if samples < 1:
        raise DomainError(f"need samples >= 1, got {samples}")
    if workers < 1:
        raise DomainError(f"need workers >= 1, got {workers}")
    if not 1 <= k <= spec.n:
        raise InvalidSubsystem(f"k={k} outside 1..{spec.n}")

    argsets = [(spec, k, seed, t) for t in range(samples)]
    if workers == 1:
        records = [_run_one(a) for a in argsets]
    else:
        chunk = max(1, samples // (workers * 4))
        with multiprocessing.Pool(processes=workers) as pool:
            records = list(pool.imap(_run_one, argsets, chunksize=chunk))

    flagged = sum(1 for r in records if r.flagged)
    if flagged > FLAG_BUDGET * samples:
        raise PairingFailure(
            f"{flagged} of {samples} trials failed eigenvalue pairing "
            f"(budget {FLAG_BUDGET:.1%})"
        )
    return summarize_records(records, seed=seed, profile=spec), records


def concentration_sweep(
    scaling: ScalingConfig,
    n_list,
    samples: int,
    seed: int,
    k_rule=None,
    base_profile: str = "constant",
    workers: int = 1,
    record_sink=None,
):
    """Run one ensemble per n and collect (n, RunSummary) pairs.

    The profile at each n is constant with z = scaling.z_value(n) (or the
    vacuum when base_profile="vacuum"; a callable n -> ProfileSpec is also
    accepted).  k comes from k_rule(n) when given, else scaling.k_of(n).
    Each n gets its own base seed (seed + index) so rows stay independent.
    record_sink, when given, receives (n, summary, records) per row.
    """
    results = []
    for index, n in enumerate(n_list):
        n = int(n)
        if n < 4:
            raise DomainError(f"sweep rows need n >= 4, got {n}")
        if callable(base_profile):
            spec = base_profile(n)
        elif base_profile == "constant":
            spec = scaling.profile_for(n)
        elif base_profile == "vacuum":
            spec = constant_profile(1.0, n)
        else:
            raise DomainError(f"unknown base profile {base_profile!r}")
        k_n = int(k_rule(n)) if k_rule is not None else scaling.k_of(n)
        summary, records = run_ensemble(spec, k_n, samples, seed + index, workers)
        if record_sink is not None:
            record_sink(n, summary, records)
        results.append((n, summary))
    return results


def lipschitz_bound(z, k: int) -> float:
    """The proved ceiling for |f(U) - f(V)| / ||U - V||_F."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    return 32.0 * math.sqrt(2.0 * k) * float(np.max(z)) ** 4


def lipschitz_probe(z, k: int, pairs: int, rng) -> float:
    """Max observed difference quotient of f over random unitary pairs.

    Alternates independent Haar pairs with nearby pairs V = U expm(K), K a
    random skew-Hermitian step of Frobenius size log-uniform in [1e-4, 1e-1];
    the nearby pairs are what probe the local slope.  Distances use the
    Frobenius norm, matching the bound from lipschitz_bound.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    n = z.size
    if not 1 <= k <= n:
        raise InvalidSubsystem(f"k={k} outside 1..{n}")
    if pairs < 1:
        raise DomainError(f"need pairs >= 1, got {pairs}")
    gen = _as_generator(rng)
    fiducial = fiducial_covariance(z)
    lam_bar = average_energy(z)

    def f_of(unitary):
        M = rotate_covariance(fiducial, eta_embed(unitary))
        return concentration_f(reduce_covariance(M, k), lam_bar)

    worst = 0.0
    for i in range(pairs):
        U = sample_haar_unitary(n, gen)
        if i % 2 == 0:
            V = sample_haar_unitary(n, gen)
        else:
            A = gen.standard_normal((n, n)) + 1j * gen.standard_normal((n, n))
            K = 0.5 * (A - A.conj().T)
            size = np.linalg.norm(K)
            if size == 0.0:
                continue
            K *= 10.0 ** gen.uniform(-4.0, -1.0) / size
            V = U @ expm(K)
        dist = float(np.linalg.norm(U - V))
        if dist < 1e-13:
            continue
        worst = max(worst, abs(f_of(U) - f_of(V)) / dist)
    return worst


def _atomic_write_text(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-cvtypical-")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def trial_csv_header(k: int) -> str:
    lambdas = [f"lambda_{j}" for j in range(1, k + 1)]
    return ",".join(TRIAL_CSV_FIXED_COLUMNS + tuple(lambdas))


def format_trials_csv(records, provenance: str | None = None) -> str:
    """Render records as CSV text.  Floats use repr so parsing the file back
    reproduces them exactly; a leading '#' line carries provenance."""
    if not records:
        raise DomainError("refusing to format an empty trial list")
    k = records[0].k
    lines = []
    if provenance:
        lines.append("# " + provenance)
    lines.append(trial_csv_header(k))
    for r in records:
        if r.k != k:
            raise DomainError("records in one CSV must share k")
        cells = [
            str(r.trial_id),
            str(r.n),
            str(r.k),
            repr(r.lambda_bar),
            repr(r.entropy),
            repr(r.f_value),
            repr(r.delta),
            repr(r.purity_residual),
        ]
        cells.extend(repr(x) for x in r.symplectic_spectrum)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_trials_csv(path, records, provenance: str | None = None) -> None:
    _atomic_write_text(path, format_trials_csv(records, provenance))


def read_trials_csv(path):
    """Parse a trials CSV back into records.

    Returns (records, provenance line or None).  The CSV does not carry the
    tr_jm2/tr_jm4 diagnostics, so those come back NaN; a row whose f field is
    NaN is a flagged trial.
    """
    with open(path) as handle:
        lines = [line.rstrip("\n") for line in handle]
    provenance = None
    rows = [l for l in lines if l]
    if rows and rows[0].startswith("#"):
        provenance = rows[0][1:].strip()
        rows = rows[1:]
    if not rows:
        raise DomainError(f"{path} has no header row")
    header = rows[0].split(",")
    fixed = list(TRIAL_CSV_FIXED_COLUMNS)
    if header[: len(fixed)] != fixed or len(header) <= len(fixed):
        raise DomainError(f"{path} does not match the trial CSV schema")
    k = len(header) - len(fixed)
    if header[len(fixed):] != [f"lambda_{j}" for j in range(1, k + 1)]:
        raise DomainError(f"{path} has malformed spectrum columns")
    records = []
    for row in rows[1:]:
        cells = row.split(",")
        if len(cells) != len(header):
            raise DomainError(f"{path}: row width {len(cells)} != {len(header)}")
        f_value = float(cells[5])
        records.append(
            TrialRecord(
                trial_id=int(cells[0]),
                n=int(cells[1]),
                k=int(cells[2]),
                lambda_bar=float(cells[3]),
                entropy=float(cells[4]),
                f_value=f_value,
                delta=float(cells[6]),
                purity_residual=float(cells[7]),
                symplectic_spectrum=tuple(float(c) for c in cells[8:]),
                tr_jm2=float("nan"),
                tr_jm4=float("nan"),
                flagged=math.isnan(f_value),
            )
        )
    return records, provenance


def summary_to_jsonable(summary: RunSummary, provenance: dict | None = None) -> dict:
    payload = {
        "samples": summary.samples,
        "n": summary.n,
        "k": summary.k,
        "lambda_bar": summary.lambda_bar,
        "seed": summary.seed,
        "flagged": summary.flagged,
        "mean_f": summary.mean_f,
        "se_f": summary.se_f,
        "mean_tr_jm2": summary.mean_tr_jm2,
        "se_tr_jm2": summary.se_tr_jm2,
        "mean_tr_jm4": summary.mean_tr_jm4,
        "se_tr_jm4": summary.se_tr_jm4,
        "mean_entropy": summary.mean_entropy,
        "se_entropy": summary.se_entropy,
        "std_entropy": summary.std_entropy,
        # repr keys survive JSON exactly; float(key) restores them
        "tail_counts": {repr(eps): frac for eps, frac in summary.tail_counts.items()},
    }
    if provenance is not None:
        payload["provenance"] = provenance
    return payload


def summary_from_jsonable(payload: dict) -> RunSummary:
    return RunSummary(
        samples=int(payload["samples"]),
        n=int(payload["n"]),
        k=int(payload["k"]),
        lambda_bar=float(payload["lambda_bar"]),
        seed=int(payload["seed"]),
        flagged=int(payload["flagged"]),
        mean_f=float(payload["mean_f"]),
        se_f=float(payload["se_f"]),
        mean_tr_jm2=float(payload["mean_tr_jm2"]),
        se_tr_jm2=float(payload["se_tr_jm2"]),
        mean_tr_jm4=float(payload["mean_tr_jm4"]),
        se_tr_jm4=float(payload["se_tr_jm4"]),
        mean_entropy=float(payload["mean_entropy"]),
        se_entropy=float(payload["se_entropy"]),
        std_entropy=float(payload["std_entropy"]),
        tail_counts={float(key): float(val) for key, val in payload["tail_counts"].items()},
    )


def write_summary_json(path, summary: RunSummary, provenance: dict | None = None) -> None:
    payload = summary_to_jsonable(summary, provenance)
    _atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_summary_json(path):
    """Returns (RunSummary, provenance dict or None)."""
    with open(path) as handle:
        payload = json.load(handle)
    return summary_from_jsonable(payload), payload.get("provenance")
