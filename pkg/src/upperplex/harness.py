"""Seeded Monte Carlo experiments, aggregation and CSV/JSONL output."""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from math import comb, floor, inf

from .asymptotics import (
    AsymptoticProfile,
    asymptotic_profile,
    omega_function,
    predicted_counts,
)
from .collapse import collapse_complex, collapse_with_deleted_dim
from .complex import SimplicialComplex, closure, full_skeleton, full_skeleton_up_to
from .errors import LawViolation, ResourceCapError
from .homology import NNZ_CAP, homology_profile
from .lm import FaceChooser, build_face_chooser, modified_complex, stratum_index
from .sampler import (
    ModelParams,
    SampleSeed,
    g_counts,
    g_hat,
    g_prime,
    parse_alpha,
    sample_hypergraph,
)

MAX_SIMPLICES = 10_000_000
MEASUREMENTS = ("homology", "collapse", "lm", "goodness")


@dataclass
class ExperimentConfig:
    n: int
    r: int
    alpha: tuple[float, ...]
    trials: int = 1
    master_seed: int = 0
    measurements: tuple[str, ...] = ("homology", "collapse")
    omega: str = "ln"
    threads: int = 1
    method: str = "auto"
    timings: bool = False
    verify: bool = False
    homology_on: str = "collapsed"
    max_simplices: int = MAX_SIMPLICES
    nnz_cap: int = NNZ_CAP
    chooser_seed: int = 0
    csv_path: str | None = None
    jsonl_path: str | None = None
    summary_path: str | None = None

    def __post_init__(self):
        self.alpha = tuple(float(a) for a in self.alpha)
        self.measurements = tuple(self.measurements)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = set(self.measurements) - set(MEASUREMENTS)
        if unknown:
            raise ValueError(f"unknown measurements {sorted(unknown)}")
        if self.homology_on not in ("collapsed", "full"):
            raise ValueError("homology_on must be 'collapsed' or 'full'")

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.n, self.r, self.alpha)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        if isinstance(data.get("alpha"), str):
            data["alpha"] = parse_alpha(data["alpha"])
        else:
            data["alpha"] = tuple(inf if a in ("inf", "Infinity", None) else float(a)
                                  for a in data["alpha"])
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        return cls(**data)


def effective_ell(profile: AsymptoticProfile) -> int:
    """Critical dimension, or a clamped floor(beta) outside the open regimes."""
    if profile.ell is not None:
        return profile.ell
    if profile.beta == -inf or profile.beta < 0:
        return 0
    return min(profile.r, floor(profile.beta + 1e-9))


@dataclass
class ExperimentRecord:
    trial: int
    seed: int
    n: int
    r: int
    alpha: tuple[float, ...]
    ell: int
    g: tuple[int, ...]
    f: tuple[int, ...]
    ghat: dict[int, int]
    gprime: int
    fprime: tuple[int, ...] | None = None
    B: dict[int, int] | None = None
    betti: tuple[int, ...] | None = None
    full_skeleton_up_to: int = -1
    phase_ms_sample: int = 0
    phase_ms_collapse: int = 0
    phase_ms_homology: int = 0
    x_empty: bool = False
    ftilde_prime: dict[int, int] = field(default_factory=dict)
    lm_hat_vanishes: bool | None = None
    lm_union_vanishes: bool | None = None
    collapse_homology_equal: bool | None = None
    capped: bool = False
    error: str = ""


def _alpha_text(alpha) -> str:
    return ",".join("inf" if a == inf else repr(float(a)) for a in alpha)


def csv_columns(r: int, ell: int) -> list[str]:
    cols = ["trial", "seed", "n", "r", "alpha"]
    cols += [f"g_{i}" for i in range(r + 1)]
    cols += [f"f_{k}" for k in range(r + 1)]
    cols += [f"ghat_{k}" for k in range(ell, r + 1)]
    cols += ["gprime"]
    cols += [f"fprime_{k}" for k in range(r + 1)]
    cols += [f"B_{k}" for k in range(ell, r + 1)]
    cols += [f"b_{k}" for k in range(r + 1)]
    cols += ["full_skeleton_up_to", "phase_ms_sample", "phase_ms_collapse",
             "phase_ms_homology"]
    return cols


def record_row(rec: ExperimentRecord) -> dict:
    """Flat mapping of the CSV columns for one record (None for unmeasured values)."""
    row = {"trial": rec.trial, "seed": rec.seed, "n": rec.n, "r": rec.r,
           "alpha": _alpha_text(rec.alpha)}
    r, ell = rec.r, rec.ell
    for i in range(r + 1):
        row[f"g_{i}"] = rec.g[i]
    for k in range(r + 1):
        row[f"f_{k}"] = rec.f[k]
    for k in range(ell, r + 1):
        row[f"ghat_{k}"] = rec.ghat[k]
    row["gprime"] = rec.gprime
    for k in range(r + 1):
        row[f"fprime_{k}"] = None if rec.fprime is None else rec.fprime[k]
    for k in range(ell, r + 1):
        row[f"B_{k}"] = None if rec.B is None else rec.B[k]
    for k in range(r + 1):
        row[f"b_{k}"] = None if rec.betti is None else rec.betti[k]
    row["full_skeleton_up_to"] = rec.full_skeleton_up_to
    row["phase_ms_sample"] = rec.phase_ms_sample
    row["phase_ms_collapse"] = rec.phase_ms_collapse
    row["phase_ms_homology"] = rec.phase_ms_homology
    return row


def law_violations(rec: ExperimentRecord) -> list[str]:
    """Deterministic per-sample inequalities that fail for ``rec``."""
    out = []
    r, ell = rec.r, rec.ell
    for k in range(r + 1):
        if rec.f[k] > rec.ghat[k]:
            out.append(f"f_{k}={rec.f[k]} > ghat_{k}={rec.ghat[k]}")
    if rec.B is not None:
        for k in range(ell, r + 1):
            if rec.B[k] > 2 * (rec.ghat[k] - rec.f[k]):
                out.append(f"B_{k}={rec.B[k]} > 2(ghat_{k} - f_{k})")
    if rec.fprime is not None:
        for k in range(r + 1):
            if rec.fprime[k] > rec.f[k]:
                out.append(f"fprime_{k} > f_{k}")
        if rec.B is not None:
            for k in range(ell + 1, r + 1):
                if rec.fprime[k] > comb(r + 1, k + 1) * rec.B[k - 1]:
                    out.append(f"fprime_{k} > C(r+1,k+1) B_{k - 1}")
        if rec.betti is not None and ell <= r:
            fp = rec.fprime
            below = fp[ell - 1] if ell > 0 else int(not rec.x_empty)
            above = fp[ell + 1] if ell < r else 0
            if not fp[ell] - above - below <= rec.betti[ell] <= fp[ell]:
                out.append(f"sandwich fails at ell={ell}: b={rec.betti[ell]}, f'={fp}")
    if rec.betti is not None and not rec.x_empty:
        chi = sum((-1) ** k * x for k, x in enumerate(rec.f)) - 1
        if chi != sum((-1) ** k * b for k, b in enumerate(rec.betti)):
            out.append("Euler-Poincare fails")
    if rec.collapse_homology_equal is False:
        out.append("collapse changed homology")
    return out


def _ms(start: float) -> int:
    return int(round((time.perf_counter() - start) * 1000))


def run_trial(config: ExperimentConfig, trial: int, profile: AsymptoticProfile | None = None,
              chooser: FaceChooser | None = None) -> ExperimentRecord:
    params = config.params
    profile = profile or asymptotic_profile(params)
    ell = effective_ell(profile)
    seed = SampleSeed(config.master_seed, trial)
    clock = time.perf_counter()
    X = sample_hypergraph(params, seed, config.method)
    t_sample = _ms(clock)
    rec = ExperimentRecord(
        trial=trial, seed=seed.stream, n=params.n, r=params.r, alpha=params.alpha, ell=ell,
        g=g_counts(X), f=(0,) * (params.r + 1),
        ghat={k: g_hat(X, k) for k in range(params.r + 1)},
        gprime=g_prime(X, ell), x_empty=X.is_empty(),
    )
    bound = sum(2 ** len(t) - 1 for t in X)
    if bound > 8 * config.max_simplices:
        rec.capped, rec.error = True, f"closure bound {bound} exceeds cap"
        return rec
    Y = closure(X)
    if len(Y) > config.max_simplices:
        rec.capped, rec.error = True, f"{len(Y)} simplices exceeds cap"
        return rec
    rec.f = Y.f_vector(params.r + 1)
    rec.full_skeleton_up_to = full_skeleton_up_to(Y)

    want = set(config.measurements)
    target: SimplicialComplex = Y
    clock = time.perf_counter()
    if want & {"collapse", "goodness"}:
        Yp, report = collapse_complex(X, ell, verify=config.verify)
        rec.B = report.B
        if "collapse" in want:
            rec.fprime = report.f_prime
            if config.homology_on == "collapsed":
                target = Yp
            if profile.regime == "U_ell":
                for k in range(profile.ell_prime + 1, params.r + 1):
                    rec.ftilde_prime[k] = collapse_with_deleted_dim(X, k, ell, verify=False)[1][k]
    t_collapse = _ms(clock)

    clock = time.perf_counter()
    try:
        if "homology" in want:
            hp = homology_profile(target, top=params.r, cap=config.nnz_cap)
            rec.betti = hp.betti
            if config.verify and target is not Y:
                full = homology_profile(Y, top=params.r, cap=config.nnz_cap)
                rec.collapse_homology_equal = full.betti == hp.betti
        if "lm" in want and chooser is not None:
            lvl = chooser.ell - 1
            hat = modified_complex(X, chooser, chooser.ell)
            rec.lm_hat_vanishes = homology_profile(hat, top=lvl, cap=config.nnz_cap).betti[lvl] == 0
            K = full_skeleton(params.n, lvl)
            union = SimplicialComplex(K.simplices | Y.simplices, n=params.n, r=params.r,
                                      check=False)
            rec.lm_union_vanishes = (
                homology_profile(union, top=lvl, cap=config.nnz_cap).betti[lvl] == 0)
    except ResourceCapError as exc:
        rec.capped, rec.error = True, str(exc)
    t_homology = _ms(clock)

    if config.timings:
        rec.phase_ms_sample, rec.phase_ms_collapse, rec.phase_ms_homology = (
            t_sample, t_collapse, t_homology)
    if not rec.capped:
        bad = law_violations(rec)
        if bad:
            raise LawViolation(f"trial {trial}: " + "; ".join(bad))
    return rec


def _trial_job(args):
    config, trial, profile, chooser = args
    return run_trial(config, trial, profile, chooser)


def prepare_chooser(config: ExperimentConfig, profile: AsymptoticProfile) -> FaceChooser | None:
    if "lm" not in config.measurements or profile.regime != "U_ell" or profile.ell == 0:
        return None
    return build_face_chooser(config.n, profile.ell, stratum_index(profile), config.chooser_seed)


def run_experiment(config: ExperimentConfig) -> tuple[list[ExperimentRecord], dict]:
    """Run every trial; records are ordered by trial index whatever the worker count."""
    profile = asymptotic_profile(config.params)
    chooser = prepare_chooser(config, profile)
    jobs = [(config, t, profile, chooser) for t in range(config.trials)]
    if config.threads > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            records = list(pool.map(_trial_job, jobs, chunksize=max(1, len(jobs) // (4 * config.threads))))
    else:
        records = [_trial_job(job) for job in jobs]
    return records, summarize(records, profile, config.n, config.omega)


# -- aggregation ----------------------------------------------------------------

def _stats(values: list[int]) -> dict:
    T = len(values)
    s = sum(values)
    ss = sum(v * v for v in values)
    mean = Fraction(s, T)
    var = Fraction(ss * T - s * s, T * (T - 1)) if T > 1 else Fraction(0)
    return {"mean": float(mean), "stderr": math.sqrt(var / T) if T > 1 else 0.0, "sum": s}


def summarize(records: list[ExperimentRecord], profile: AsymptoticProfile, n: int,
              omega: str = "ln") -> dict:
    usable = [rec for rec in records if not rec.capped]
    out: dict = {"trials": len(records), "capped": len(records) - len(usable),
                 "regime": profile.regime, "ell": profile.ell, "ell_prime": profile.ell_prime}
    if not usable:
        return out
    r = usable[0].r
    ell = usable[0].ell
    T = len(usable)
    q: dict[str, dict] = {}
    for i in range(r + 1):
        q[f"g_{i}"] = _stats([rec.g[i] for rec in usable])
        q[f"f_{i}"] = _stats([rec.f[i] for rec in usable])
        q[f"ghat_{i}"] = _stats([rec.ghat[i] for rec in usable])
    q["gprime"] = _stats([rec.gprime for rec in usable])
    if all(rec.fprime is not None for rec in usable):
        for k in range(r + 1):
            q[f"fprime_{k}"] = _stats([rec.fprime[k] for rec in usable])
    if all(rec.B is not None for rec in usable):
        for k in range(ell, r + 1):
            q[f"B_{k}"] = _stats([rec.B[k] for rec in usable])
    have_betti = all(rec.betti is not None for rec in usable)
    if have_betti:
        for k in range(r + 1):
            q[f"b_{k}"] = _stats([rec.betti[k] for rec in usable])
        out["frac_betti_zero"] = {k: sum(rec.betti[k] == 0 for rec in usable) / T
                                  for k in range(r + 1)}
    out["quantities"] = q
    out["frac_x_empty"] = sum(rec.x_empty for rec in usable) / T
    out["frac_full_skeleton"] = sum(rec.full_skeleton_up_to >= ell - 1 for rec in usable) / T
    tilde_dims = sorted({k for rec in usable for k in rec.ftilde_prime})
    out["frac_ftilde_zero"] = {k: sum(rec.ftilde_prime.get(k, 0) == 0 for rec in usable) / T
                               for k in tilde_dims}
    lm = [rec.lm_hat_vanishes for rec in usable if rec.lm_hat_vanishes is not None]
    if lm:
        out["frac_lm_hat_vanishes"] = sum(lm) / len(lm)
        out["frac_lm_union_vanishes"] = sum(rec.lm_union_vanishes for rec in usable
                                            if rec.lm_union_vanishes is not None) / len(lm)

    ratios: dict[str, float] = {}
    params = ModelParams(n, r, usable[0].alpha)
    for i, eg in enumerate(params.expected_g()):
        if eg > 0:
            ratios[f"g_{i}"] = q[f"g_{i}"]["mean"] / eg
    if profile.regime == "U_ell":
        pred = predicted_counts(profile, n, omega)
        for k, v in pred.f.items():
            if isinstance(v, float) and v > 0:
                ratios[f"f_{k}"] = q[f"f_{k}"]["mean"] / v
        ratios["gprime"] = q["gprime"]["mean"] / pred.g_prime
        if have_betti:
            ratios[f"b_{profile.ell}"] = q[f"b_{profile.ell}"]["mean"] / pred.b_ell
            w = omega_function(omega)(n)
            out["frac_betti_within_bound"] = {
                k: sum(rec.betti[k] <= w * n ** profile.nu[k] for rec in usable) / T
                for k in range(profile.ell + 1, profile.ell_prime + 1)}
    out["ratio_to_prediction"] = ratios
    return out


@dataclass
class Check:
    name: str
    observed: float
    predicted: float | None
    band: tuple[float, float]
    passed: bool
    omega: float | None = None


def aggregate_and_compare(records: list[ExperimentRecord], profile: AsymptoticProfile, n: int,
                          omega: str = "ln", band: tuple[float, float] = (0.8, 1.2),
                          aas_threshold: float = 0.9) -> list[Check]:
    """Pass/fail per prediction.

    Ratio checks compare the trial mean with the leading-order prediction;
    a.a.s. statements pass when at least ``aas_threshold`` of the trials
    satisfy them.  A deterministic law failing in any record raises
    :class:`LawViolation`.
    """
    for rec in records:
        if not rec.capped:
            bad = law_violations(rec)
            if bad:
                raise LawViolation(f"trial {rec.trial}: " + "; ".join(bad))
    summary = summarize(records, profile, n, omega)
    checks: list[Check] = []
    frac_band = (aas_threshold, 1.0)
    if profile.regime in ("U_minus", "degenerate"):
        x = summary.get("frac_x_empty", 0.0)
        checks.append(Check("X empty", x, 1.0, frac_band, x >= aas_threshold))
        return checks
    if profile.regime != "U_ell":
        return checks
    pred = predicted_counts(profile, n, omega)
    w = pred.omega
    for name, ratio in summary.get("ratio_to_prediction", {}).items():
        if name.startswith("g_"):
            continue
        checks.append(Check(f"{name} / prediction", ratio, 1.0, band,
                            band[0] <= ratio <= band[1]))
    ell = profile.ell
    checks.append(Check(f"full {ell - 1}-skeleton", summary["frac_full_skeleton"], 1.0,
                        frac_band, summary["frac_full_skeleton"] >= aas_threshold))
    for k, frac in summary.get("frac_betti_zero", {}).items():
        if k < ell or k > profile.ell_prime:
            checks.append(Check(f"b_{k} = 0", frac, 1.0, frac_band, frac >= aas_threshold))
    for k, frac in summary.get("frac_betti_within_bound", {}).items():
        checks.append(Check(f"b_{k} <= omega n^nu_{k}", frac, w * n ** profile.nu[k],
                            frac_band, frac >= aas_threshold, w))
    for k, frac in summary.get("frac_ftilde_zero", {}).items():
        checks.append(Check(f"ftilde'_{k} = 0", frac, 1.0, frac_band, frac >= aas_threshold))
    return checks


# -- output --------------------------------------------------------------------

def _jsonl_row(rec: ExperimentRecord) -> dict:
    row = record_row(rec)
    row["x_empty"] = rec.x_empty
    for k, v in sorted(rec.ftilde_prime.items()):
        row[f"ftilde_prime_{k}"] = v
    row["lm_hat_vanishes"] = rec.lm_hat_vanishes
    row["lm_union_vanishes"] = rec.lm_union_vanishes
    row["capped"] = rec.capped
    row["error"] = rec.error
    return row


def emit(records: list[ExperimentRecord], fmt: str, path: str | os.PathLike,
         r: int | None = None, ell: int | None = None) -> None:
    """Write records sorted by trial; ``r``/``ell`` fix the header when there are no records."""
    records = sorted(records, key=lambda rec: rec.trial)
    if records:
        r, ell = records[0].r, records[0].ell
    if fmt not in ("csv", "jsonl"):
        raise ValueError(f"unknown format {fmt!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            if fmt == "csv":
                if r is None or ell is None:
                    raise ValueError("r and ell are required to write an empty CSV")
                writer = csv.DictWriter(fh, fieldnames=csv_columns(r, ell), lineterminator="\n")
                writer.writeheader()
                for rec in records:
                    writer.writerow({k: ("" if v is None else v)
                                     for k, v in record_row(rec).items()})
            else:
                for rec in records:
                    fh.write(json.dumps(_jsonl_row(rec), sort_keys=False) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {fmt} output to {path}: {exc}") from exc


def read_csv(path: str | os.PathLike) -> list[dict]:
    """Parse an emitted CSV back into rows of ints (alpha stays text, blanks become None)."""
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            out.append({k: (v if k == "alpha" else (None if v == "" else int(v)))
                        for k, v in row.items()})
    return out


def write_summary(summary: dict, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, default=str)
        fh.write("\n")


def check_as_dict(check: Check) -> dict:
    return asdict(check)
