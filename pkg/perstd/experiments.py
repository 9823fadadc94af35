#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Experiment commands
   -------------------

   Each ``cmd_*`` takes a validated ExperimentConfig and returns the
   process exit status:

	0  success
	1  configuration or file error (raised as PerstdError)
	2  recovery not guaranteed
	3  solver did not converge, results written anyway

   Monte Carlo trials are independent, seeded by derive_seed() from
   the experiment seed, and may run on a process pool.  Results are
   CSV files with fixed headers plus a plain text summary and a
   manifest.json with checksums of everything written.
'''

import concurrent.futures
import csv
import hashlib
import json
import logging
import os
import platform
import sys
from dataclasses import dataclass

import numpy as np
import scipy

from . import __version__
from .tensor_core import Tensor3, cp_reconstruct
from .model import MeasurementModel
from .cpd import CpdOptions, derive_seed
from .uniqueness import ProblemDims, Witness, check_generic, witness_litany
from .semialg import semialg_decompose
from .coupled_als import (
    CouplingSpec, coupled_als_fit, coupled_als_restarts, state_from_semialg,
)
from .datagen import (
    SynthConfig, CloudConfig, generate_synthetic, generate_fusion, synthetic_hri,
    cloud_metrics, nrmse,
)
from .formats.dense import read_tensor, read_matrix, write_tensor, write_matrix
from .internals.exceptions import PerstdError, ConfigSemanticError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_GUARANTEED = 2
EXIT_NOT_CONVERGED = 3

SAMPLE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "samples")

#######################################################################
# Settings taken from the configuration

@dataclass(frozen=True)
class SolverSettings():
    ''' Solver section, with command line overrides applied '''

    method: str = "als"
    init: str = "random"
    restarts: int = 50
    max_iters: int = 1000
    tol: float = 1e-9
    cpd_restarts: int = 50
    witness: tuple = None
    distinct_cpd: bool = False

    def cpd_options(self, seed):
        ''' Options for the per-dataset CPDs '''
        return CpdOptions(
            rank=1,
            max_iters=self.max_iters,
            tol=self.tol,
            restarts=self.cpd_restarts,
            seed=seed,
        )

def solver_settings(cfg):
    ''' SolverSettings from the Solver section '''
    sect = cfg.section("Solver")
    return SolverSettings(
        method=sect.Method.value,
        init=sect.Init.value,
        restarts=cfg.get("restarts"),
        max_iters=sect.Max_iters.value,
        tol=sect.Tol.value,
        cpd_restarts=sect.Cpd_restarts.value,
        witness=sect.Witness.value,
        distinct_cpd=sect.Distinct_cpd.value,
    )

def common_dims(cfg):
    ''' (M1, M2, M3) '''
    return cfg.Common.Dims.value

def problem_dims(cfg, r=None, l=None):
    ''' ProblemDims from Common and Dataset sections '''
    m = common_dims(cfg)
    datasets = cfg.datasets
    return ProblemDims(
        m=m,
        n=[x.Dims.value for x in datasets],
        p_rank=[x.p_rank(m) for x in datasets],
        p_full_col=[x.p_full_column(m) for x in datasets],
        r=cfg.Common.Rank.value if r is None else r,
        l=[x.Rank.value for x in datasets] if l is None else l,
    )

def coupling(cfg):
    ''' CouplingSpec from the Dataset Coupled fields '''
    return CouplingSpec.from_modes([x.Coupled.value for x in cfg.datasets])

def synth_config(cfg, snr_db, seed):
    ''' SynthConfig from Common, Dataset and Synth sections '''
    return SynthConfig(
        common_dims=common_dims(cfg),
        dataset_dims=[x.Dims.value for x in cfg.datasets],
        r=cfg.Common.Rank.value,
        l=[x.Rank.value for x in cfg.datasets],
        snr_db=snr_db,
        p_dist=cfg.section("Synth").P_distribution.value,
        seed=seed,
    )

def choose_witness(settings, dims):
    ''' Configured witness or the one check_generic() prefers '''
    if settings.witness is not None:
        return Witness.from_one_based(settings.witness)
    return check_generic(dims).witness

#######################################################################
# Output

class Output():
    ''' Output directory, remembers what was written for the manifest '''

    def __init__(self, directory):
        self.directory = directory
        self.files = []
        os.makedirs(directory, exist_ok=True)

    def path(self, name):
        ''' Full path of an output file, recorded '''
        self.files.append(name)
        return os.path.join(self.directory, name)

    def csv(self, name, header, rows):
        ''' Write a CSV table '''
        with open(self.path(name), "w", encoding="utf8", newline="") as file:
            writer = csv.writer(file)
            writer.writerow(header)
            for row in rows:
                writer.writerow(row)

    def text(self, name, lines):
        ''' Write lines of text '''
        with open(self.path(name), "w", encoding="utf8") as file:
            for line in lines:
                file.write(line + "\n")

    def manifest(self, command, cfg, extra=None):
        ''' manifest.json with versions and sha256 of every file written '''
        checksums = {}
        for name in sorted(set(self.files)):
            with open(os.path.join(self.directory, name), "rb") as file:
                checksums[name] = "sha256:" + hashlib.sha256(file.read()).hexdigest()
        doc = {
            "command": command,
            "seed": cfg.get("seed"),
            "options": dict(sorted(cfg.overrides.items())),
            "versions": {
                "perstd": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": platform.python_version(),
            },
            "files": checksums,
        }
        if extra:
            doc.update(extra)
        with open(os.path.join(self.directory, "manifest.json"), "w", encoding="utf8") as file:
            json.dump(doc, file, indent=2, sort_keys=True)
            file.write("\n")

def output(cfg, default):
    ''' Output for the configured or default directory '''
    return Output(cfg.get("out") or os.path.join(cfg.basedir, default))

def run_tasks(func, tasks, jobs):
    ''' map() over a process pool, or in-process for one job '''
    if jobs <= 1 or len(tasks) <= 1:
        return [func(x) for x in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, tasks))

def mean_std(values):
    ''' Mean and standard deviation of the finite values '''
    arr = np.array([x for x in values if np.isfinite(x)])
    if not arr.size:
        return float("nan"), float("nan"), 0
    return float(arr.mean()), float(arr.std()), int(arr.size)

def summarize(rows, header):
    ''' Aligned text table '''
    yield "  ".join("%-14s" % x for x in header)
    for row in rows:
        yield "  ".join(
            "%-14.6g" % x if isinstance(x, float) else "%-14s" % str(x) for x in row
        )

#######################################################################
# Monte Carlo trials on synthetic data

METHODS = ("semialg", "als-init1", "als-init2")

@dataclass(frozen=True)
class SynthTask():
    ''' One Monte Carlo run, picklable '''

    key: tuple
    synth: SynthConfig
    settings: SolverSettings
    spec: CouplingSpec
    witness: Witness
    methods: tuple
    alpha: float = 0.0
    fit_r: int = None
    fit_l: tuple = None

@dataclass(frozen=True)
class TrialResult():
    ''' NRMSE of one method on one run '''

    key: tuple
    method: str
    nrmse: float
    converged: bool
    note: str = ""

def _common_error(c_hat, truths):
    return float(np.mean([nrmse(c_hat, x) for x in truths]))

def _run_method(task, inst, method, semialg_cache):
    settings = task.settings
    r = task.fit_r or task.synth.r
    l = task.fit_l or task.synth.l
    seed = derive_seed(task.synth.seed, 2)
    if method in ("semialg", "als-init1"):
        if task.witness is None:
            raise ConfigSemanticError("No witness for the semi-algebraic method")
        if "result" not in semialg_cache:
            semialg_cache["result"] = semialg_decompose(
                inst.y, inst.meas, r, l, task.witness,
                settings.cpd_options(seed),
                distinct_cpd=settings.distinct_cpd,
                check_witness=False,
            )
        result = semialg_cache["result"]
        if method == "semialg":
            return result.common_tensor(), not result.flags
        init = state_from_semialg(result, inst.y, inst.meas, l, task.spec, seed)
        state = coupled_als_fit(
            inst.y, inst.meas, r, l, task.spec, init, settings.max_iters, settings.tol
        )
    else:
        state = coupled_als_restarts(
            inst.y, inst.meas, r, l, task.spec,
            restarts=settings.restarts,
            seed=seed,
            max_iters=settings.max_iters,
            tol=settings.tol,
        )
    return cp_reconstruct(state.common()), state.converged

def synth_trial(task):
    ''' Generate one instance and run every requested method on it '''
    inst = generate_synthetic(task.synth, alpha=task.alpha)
    truths = inst.commons if task.alpha else [inst.c]
    out = []
    cache = {}
    for method in task.methods:
        try:
            c_hat, converged = _run_method(task, inst, method, cache)
            out.append(TrialResult(task.key, method, _common_error(c_hat, truths), converged))
        except PerstdError as err:
            log.warning("Trial %s %s failed: %s", task.key, method, err.text)
            out.append(TrialResult(task.key, method, float("nan"), False, err.text))
    log.info("Trial %s done", task.key)
    return out

def _trial_rows(results):
    for batch in results:
        for res in batch:
            yield list(res.key) + [res.method, res.nrmse, res.converged, res.note]

def _synth_tasks(cfg, grid, make):
    ''' Tasks for every grid point × run '''
    seed = cfg.get("seed")
    tasks = []
    for gidx, point in enumerate(grid):
        for run in range(cfg.get("runs")):
            tasks.append(make(point, run, derive_seed(seed, gidx, run)))
    return tasks

def _snr_grid(cfg):
    return cfg.section("Synth").Snr_db.value

def cmd_synth_snr(cfg):
    ''' NRMSE of every method over the SNR grid '''
    settings = solver_settings(cfg)
    spec = coupling(cfg)
    witness = choose_witness(settings, problem_dims(cfg))

    def make(snr, run, seed):
        return SynthTask((snr, run), synth_config(cfg, snr, seed), settings, spec, witness, METHODS)

    tasks = _synth_tasks(cfg, _snr_grid(cfg), make)
    results = run_tasks(synth_trial, tasks, cfg.get("jobs"))
    out = output(cfg, "synth-snr")
    out.csv("trials.csv", ["snr_db", "run", "method", "nrmse", "converged", "note"],
            _trial_rows(results))
    rows = []
    for snr in _snr_grid(cfg):
        for method in METHODS:
            vals = [x.nrmse for b in results for x in b if x.key[0] == snr and x.method == method]
            mean, std, count = mean_std(vals)
            rows.append([snr, method, mean, std, count])
    header = ["snr_db", "method", "mean_nrmse", "std_nrmse", "runs_ok"]
    out.csv("nrmse.csv", header, rows)
    summary = list(summarize(rows, header))
    out.text("summary.txt", summary)
    out.manifest("synth-snr", cfg)
    for line in summary:
        print(line)
    return EXIT_OK

def cmd_ablate_alpha(cfg):
    ''' NRMSE against the per-dataset blended commons over the alpha grid '''
    settings = solver_settings(cfg)
    spec = coupling(cfg)
    snr = _snr_grid(cfg)[0]
    alphas = cfg.section("Sweep").Alpha.value

    def make(alpha, run, seed):
        return SynthTask(
            (alpha, run), synth_config(cfg, snr, seed), settings, spec, None,
            ("als-init2",), alpha=alpha,
        )

    results = run_tasks(synth_trial, _synth_tasks(cfg, alphas, make), cfg.get("jobs"))
    out = output(cfg, "ablate-alpha")
    out.csv("trials.csv", ["alpha", "run", "method", "nrmse", "converged", "note"],
            _trial_rows(results))
    rows = []
    for alpha in alphas:
        mean, std, count = mean_std(x.nrmse for b in results for x in b if x.key[0] == alpha)
        rows.append([alpha, mean, std, count])
    header = ["alpha", "mean_nrmse", "std_nrmse", "runs_ok"]
    out.csv("nrmse.csv", header, rows)
    summary = list(summarize(rows, header))
    out.text("summary.txt", summary)
    out.manifest("ablate-alpha", cfg, {"snr_db": snr})
    for line in summary:
        print(line)
    return EXIT_OK

def cmd_ablate_rank(cfg):
    ''' NRMSE over a grid of assumed ranks R × L, data at the true ranks '''
    settings = solver_settings(cfg)
    spec = coupling(cfg)
    snr = _snr_grid(cfg)[0]
    sweep = cfg.section("Sweep")
    grid = [(r, l) for r in sweep.Common_ranks.value for l in sweep.Distinct_ranks.value]
    count = len(cfg.datasets)
    seed = cfg.get("seed")
    tasks = []
    for r, l in grid:
        for run in range(cfg.get("runs")):
            # Same data for every grid cell of a run
            synth = synth_config(cfg, snr, derive_seed(seed, run))
            tasks.append(SynthTask(
                (r, l, run), synth, settings, spec, None, ("als-init2",),
                fit_r=r, fit_l=(l,) * count,
            ))
    results = run_tasks(synth_trial, tasks, cfg.get("jobs"))
    out = output(cfg, "ablate-rank")
    out.csv("trials.csv", ["common_rank", "distinct_rank", "run", "method", "nrmse",
                           "converged", "note"], _trial_rows(results))
    rows = []
    for r, l in grid:
        mean, std, ok = mean_std(
            x.nrmse for b in results for x in b if x.key[:2] == (r, l)
        )
        rows.append([r, l, mean, std, ok])
    header = ["common_rank", "distinct_rank", "mean_nrmse", "std_nrmse", "runs_ok"]
    out.csv("nrmse.csv", header, rows)
    summary = list(summarize(rows, header))
    best = min((x for x in rows if np.isfinite(x[2])), key=lambda x: x[2], default=None)
    if best is not None:
        summary.append("Minimum mean NRMSE at R=%d L=%d" % (best[0], best[1]))
    out.text("summary.txt", summary)
    out.manifest("ablate-rank", cfg, {"snr_db": snr})
    for line in summary:
        print(line)
    return EXIT_OK

#######################################################################
# Cloudy image fusion

@dataclass(frozen=True)
class FuseTask():
    ''' One fusion run, picklable '''

    key: tuple
    image_dims: tuple
    hri_file: str
    map_files: tuple
    coverage: float
    smoothing: float
    spectrum: tuple
    rank: int
    distinct_rank: int
    decimation: int
    msi_bands: int
    snr_db: float
    max_iters: int
    settings: SolverSettings
    seed: int

def _fuse_fit(task, inst, l):
    ''' Semi-algebraic start then coupled ALS, random restarts as fallback '''
    spec = CouplingSpec.full(2)
    # The MSI is fully unique and sees the spatial modes directly; the
    # HSI sees every band
    witness = Witness(1, (1, 1, 0))
    seed = derive_seed(task.seed, 2)
    try:
        result = semialg_decompose(
            inst.y, inst.meas, task.rank, l, witness,
            task.settings.cpd_options(seed),
            regress_mode3=0,
            check_witness=False,
        )
        init = state_from_semialg(result, inst.y, inst.meas, l, spec, seed)
        return coupled_als_fit(
            inst.y, inst.meas, task.rank, l, spec, init, task.max_iters, task.settings.tol
        )
    except PerstdError as err:
        log.warning("Semi-algebraic start failed (%s), using random restarts", err.text)
        return coupled_als_restarts(
            inst.y, inst.meas, task.rank, l, spec,
            restarts=task.settings.restarts, seed=seed,
            max_iters=task.max_iters, tol=task.settings.tol,
        )

def fuse_trial(task):
    ''' Personalized and baseline fusion of one cloudy scene '''
    if task.hri_file:
        hri = read_tensor(task.hri_file)
    else:
        hri = synthetic_hri(task.image_dims, task.rank, derive_seed(task.seed, 0))
    maps = None
    if task.map_files:
        maps = [read_matrix(x) for x in task.map_files]
    clouds = CloudConfig(
        hri.dims, np.array(task.spectrum), maps,
        coverage=task.coverage, smoothing=task.smoothing, seed=derive_seed(task.seed, 1),
    )
    inst = generate_fusion(hri, clouds, task.decimation, task.msi_bands, task.snr_db,
                           derive_seed(task.seed, 3))
    cc, cp = cloud_metrics(*inst.maps)
    out = []
    for method, l in (("personalized", (task.distinct_rank,) * 2), ("baseline", (0, 0))):
        try:
            state = _fuse_fit(task, inst, l)
            err = nrmse(cp_reconstruct(state.common()), hri)
            out.append((task.key, method, err, cc, cp, state.converged, ""))
        except PerstdError as err:
            out.append((task.key, method, float("nan"), cc, cp, False, err.text))
    log.info("Fusion trial %s done", task.key)
    return out

def cmd_fuse(cfg):
    ''' Cloudy HSI/MSI fusion, personalized model against an L = 0 baseline '''
    sect = cfg.section("Cloud")
    settings = solver_settings(cfg)
    hri_file = sect.Hri.value if sect.Hri else None
    if hri_file:
        dims = read_tensor(hri_file).dims
    else:
        dims = sect.Image_dims.value
    if sect.Spectrum and len(sect.spectrum()) != dims[2]:
        raise ConfigSemanticError("Cloud.Spectrum needs %d bands" % dims[2])
    spectrum = sect.spectrum() if sect.Spectrum else (0.7,) * dims[2]
    map_files = tuple(sect.Maps.value) if sect.Maps else ()
    coverages = (None,) if map_files else sect.Coverage.value
    tasks = []
    seed = cfg.get("seed")
    for cidx, coverage in enumerate(coverages):
        for run in range(cfg.get("runs")):
            tasks.append(FuseTask(
                key=(coverage if coverage is not None else "file", run),
                image_dims=tuple(dims),
                hri_file=hri_file,
                map_files=map_files,
                coverage=coverage or 0.0,
                smoothing=sect.Smoothing.value,
                spectrum=tuple(spectrum),
                rank=sect.Common_rank.value,
                distinct_rank=sect.Distinct_rank.value,
                decimation=sect.Decimation.value,
                msi_bands=sect.Msi_bands.value,
                snr_db=sect.Snr_db.value,
                max_iters=sect.Max_iters.value,
                settings=settings,
                seed=derive_seed(seed, cidx, run),
            ))
    results = run_tasks(fuse_trial, tasks, cfg.get("jobs"))
    out = output(cfg, "fuse")
    out.csv("trials.csv", ["coverage", "run", "method", "nrmse", "cc", "cp", "converged", "note"],
            (list(x[0]) + list(x[1:]) for b in results for x in b))
    rows = []
    for coverage in coverages:
        key = coverage if coverage is not None else "file"
        batch = [x for b in results for x in b if x[0][0] == key]
        cc = float(np.mean([x[3] for x in batch]))
        cp = float(np.mean([x[4] for x in batch]))
        for method in ("personalized", "baseline"):
            mean, std, count = mean_std(x[2] for x in batch if x[1] == method)
            rows.append([key, cc, cp, method, mean, std, count])
    header = ["coverage", "cc", "cp", "method", "mean_nrmse", "std_nrmse", "runs_ok"]
    out.csv("nrmse.csv", header, rows)
    summary = list(summarize(rows, header))
    out.text("summary.txt", summary)
    out.manifest("fuse", cfg)
    for line in summary:
        print(line)
    return EXIT_OK

#######################################################################
# Single problems

def cmd_check_uniqueness(cfg):
    ''' Generic recoverability report, exit 2 if not guaranteed '''
    dims = problem_dims(cfg)
    report = check_generic(dims)
    lines = list(report.lines())
    overall = report.overall
    settings = solver_settings(cfg)
    if settings.witness is not None:
        witness = Witness.from_one_based(settings.witness)
        complaints = [x.text for x in witness_litany(dims, witness)]
        lines.append("Configured witness " + str(witness) + ": " + (
            "; ".join(complaints) if complaints else "meets the conditions"
        ))
        overall = overall and not complaints
    for line in lines:
        print(line)
    if cfg.get("out"):
        out = Output(cfg.get("out"))
        out.text("uniqueness.txt", lines)
        out.manifest("check-uniqueness", cfg)
    return EXIT_OK if overall else EXIT_NOT_GUARANTEED

def load_problem(cfg):
    ''' Measured tensors and MeasurementModel from the Dataset files '''
    m = common_dims(cfg)
    y = []
    p = []
    for sect in cfg.datasets:
        t = read_tensor(sect.Tensor.value)
        if t.dims != sect.Dims.value:
            raise ConfigSemanticError(
                "%s is %s, Dims say %s" % (sect.Tensor.value, t.dims, sect.Dims.value)
            )
        y.append(t)
        row = []
        for j, path in enumerate(sect.P.value):
            if path is None:
                row.append(None)
                continue
            mat = read_matrix(path)
            if mat.shape != (t.dims[j], m[j]):
                raise ConfigSemanticError(
                    "%s is %d×%d, expected %d×%d" % (path, mat.shape[0], mat.shape[1], t.dims[j], m[j])
                )
            row.append(mat)
        p.append(row)
    return y, MeasurementModel(p, m)

def cmd_decompose(cfg):
    ''' Run the configured solver on tensors and P matrices from files '''
    settings = solver_settings(cfg)
    y, meas = load_problem(cfg)
    r = cfg.Common.Rank.value
    l = [x.Rank.value for x in cfg.datasets]
    spec = coupling(cfg)
    seed = cfg.get("seed")
    out = output(cfg, "decompose")
    converged = True
    trace = []

    semialg = None
    if settings.method == "semialg" or settings.init == "semialg":
        witness = choose_witness(settings, ProblemDims.from_measurements(meas, r, l))
        if witness is None:
            raise ConfigSemanticError("No witness satisfies the recovery conditions")
        semialg = semialg_decompose(
            y, meas, r, l, witness, settings.cpd_options(derive_seed(seed, 0)),
            distinct_cpd=settings.distinct_cpd,
        )
        for flag in semialg.flags:
            log.warning("Semi-algebraic: %s", flag)

    if settings.method == "semialg":
        common = semialg.common
        distinct = [
            x if isinstance(x, Tensor3) or x is None else cp_reconstruct(x)
            for x in semialg.distinct
        ]
    else:
        if semialg is not None:
            init = state_from_semialg(semialg, y, meas, l, spec, derive_seed(seed, 1))
            state = coupled_als_fit(y, meas, r, l, spec, init, settings.max_iters, settings.tol)
        else:
            state = coupled_als_restarts(
                y, meas, r, l, spec,
                restarts=settings.restarts,
                seed=derive_seed(seed, 1),
                max_iters=settings.max_iters,
                tol=settings.tol,
            )
        converged = state.converged
        trace = state.objective_trace
        common = state.common()
        distinct = [
            None if state.xd[k] is None else cp_reconstruct(state.distinct_factors(k))
            for k in range(len(y))
        ]

    c_hat = cp_reconstruct(common)
    write_tensor(out.path("C.t3"), c_hat)
    for j, mat in enumerate(common):
        write_matrix(out.path("C%d.m" % (j + 1)), mat)
    for k, dk in enumerate(distinct):
        if dk is None:
            dk = Tensor3.zeros(y[k].dims)
        write_tensor(out.path("D%d.t3" % (k + 1)), dk)
    out.csv("trace.csv", ["sweep", "objective"], ((i + 1, x) for i, x in enumerate(trace)))
    extra = {"method": settings.method, "init": settings.init, "converged": converged}
    truth = cfg.Common.Truth
    if truth:
        extra["nrmse"] = nrmse(c_hat, read_tensor(truth.value))
        print("NRMSE %.6g" % extra["nrmse"])
    out.manifest("decompose", cfg, extra)
    print("Results written to", out.directory)
    if not converged:
        print("Solver did not converge", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK

def _config_text(cfg, synth, directory):
    ''' A decompose configuration for the files generate() writes '''
    yield "# Written by perstd generate"
    yield "Experiment.Mode:"
    yield "\tdecompose"
    yield ""
    yield "Experiment.Seed:"
    yield "\t%d" % cfg.get("seed")
    yield ""
    yield "Experiment.Output:"
    yield "\tdecomposed"
    yield ""
    yield "Common.Dims:"
    yield "\t%d %d %d" % synth.common_dims
    yield ""
    yield "Common.Rank:"
    yield "\t%d" % synth.r
    yield ""
    yield "Common.Truth:"
    yield "\tC.t3"
    yield ""
    for k, sect in enumerate(cfg.datasets):
        name = "Dataset[%d]." % (k + 1)
        yield name + "Dims:"
        yield "\t%d %d %d" % synth.dataset_dims[k]
        yield ""
        yield name + "Rank:"
        yield "\t%d" % synth.l[k]
        yield ""
        yield name + "Coupled:"
        yield "\t" + " ".join(str(x) for x in sect.Coupled.value)
        yield ""
        yield name + "Tensor:"
        yield "\tY%d.t3" % (k + 1)
        yield ""
        yield name + "P:"
        for j in range(3):
            yield "\tP%d_%d.m" % (k + 1, j + 1)
        yield ""
    if "Solver" in cfg.sections:
        for line in cfg.Solver.serialize():
            yield line
    yield "*END*"

def cmd_generate(cfg):
    ''' Write a synthetic instance and a decompose configuration for it '''
    snr = _snr_grid(cfg)[0]
    synth = synth_config(cfg, snr, cfg.get("seed"))
    inst = generate_synthetic(synth)
    out = output(cfg, "generated")
    write_tensor(out.path("C.t3"), inst.c)
    for k in range(synth.count):
        write_tensor(out.path("Y%d.t3" % (k + 1)), inst.y[k])
        write_tensor(out.path("D%d.t3" % (k + 1)), inst.d[k])
        for j in range(3):
            write_matrix(out.path("P%d_%d.m" % (k + 1, j + 1)), inst.meas.matrix(k, j))
    out.text("decompose.cfg", _config_text(cfg, synth, out.directory))
    out.manifest("generate", cfg, {"snr_db": snr})
    print("Instance written to", out.directory)
    return EXIT_OK

def list_samples():
    ''' Names of the bundled sample configurations '''
    return sorted(x[:-4] for x in os.listdir(SAMPLE_DIR) if x.endswith(".cfg"))

def sample_text(name):
    ''' Text of a bundled sample configuration '''
    if name not in list_samples():
        raise ConfigSemanticError(
            "No sample named %s (have: %s)" % (name, ", ".join(list_samples()))
        )
    with open(os.path.join(SAMPLE_DIR, name + ".cfg"), encoding="utf8") as file:
        return file.read()

COMMANDS = {
    "synth-snr": cmd_synth_snr,
    "ablate-alpha": cmd_ablate_alpha,
    "ablate-rank": cmd_ablate_rank,
    "fuse": cmd_fuse,
    "check-uniqueness": cmd_check_uniqueness,
    "decompose": cmd_decompose,
    "generate": cmd_generate,
}
