"""Command-line entry point: sweeps, self-verification, and lazy-training runs.

Subcommands
-----------
sweep           Monte-Carlo grid over (n, d) cells; writes the results CSV
                plus a JSON run manifest.
verify-moments  Check the Haar sampler against the exact 1-/2-moment tensors.
expressibility  Trace-norm deviation of a named ensemble from its reference.
lazy            Gradient descent vs frozen-kernel linearized dynamics.

Exit codes: 0 success; 1 configuration or guard error; 2 partial cell
failure in a sweep; 3 moment verification outside tolerance.
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import sys
from dataclasses import asdict
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .ansatz import build_circuit, init_params, sample_haar_state
from .concentration import (
    GLOBAL_HAAR,
    LOCAL_HAAR,
    MAX_QUBITS,
    PAULI_Y0,
    ZERO_PROJECTOR,
    ExperimentRecord,
    SweepConfig,
    observable_from_name,
    run_sweep,
)
from .expressibility import (
    MAX_QUBITS_T1,
    MAX_QUBITS_T2,
    ensemble_sampler,
    measure,
)
from .haar import empirical_moment, weingarten_moment1, weingarten_moment2
from .qntk import LabeledState, gd_train, gram_matrix, lazy_dynamics

CSV_HEADER = "n,d,lambda,encoding,observable,num_pairs,mean_k,se_mean,var_k,se_var,bound_var,seed"

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_PARTIAL_FAILURE = 2
EXIT_TOLERANCE_FAILURE = 3

_MOMENT_TOL_T1 = 0.01
_MOMENT_TOL_T2 = 0.02
_MOMENT_REF_SAMPLES = 100_000


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def record_to_csv_row(rec: ExperimentRecord) -> str:
    return ",".join([
        str(rec.n),
        str(rec.d),
        str(rec.lam),
        rec.encoding,
        rec.observable,
        str(rec.num_pairs),
        _fmt(rec.mean_k),
        _fmt(rec.se_mean),
        _fmt(rec.var_k),
        _fmt(rec.se_var),
        _fmt(rec.bound_var),
        str(rec.seed),
    ])


def write_results_csv(path: str, records: list[ExperimentRecord]) -> None:
    lines = [CSV_HEADER]
    lines.extend(record_to_csv_row(r) for r in records)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def config_hash(config: SweepConfig) -> str:
    canonical = json.dumps(asdict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _parse_int_list(raw: str) -> tuple[int, ...]:
    parts = raw.replace(",", " ").split()
    return tuple(int(p) for p in parts)


def load_sweep_config(path: str | None, overrides: argparse.Namespace) -> SweepConfig:
    """Build a SweepConfig from an INI file plus flag overrides (flags win)."""
    fields: dict = {}
    if path is not None:
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise ValueError(f"cannot read config file {path!r}")
        if not parser.has_section("sweep"):
            raise ValueError(f"config file {path!r} is missing a [sweep] section")
        sec = parser["sweep"]
        if "n_values" in sec:
            fields["n_values"] = _parse_int_list(sec["n_values"])
        if "d_values" in sec and sec["d_values"].strip():
            fields["d_values"] = _parse_int_list(sec["d_values"])
        for key in ("d_coeff", "num_pairs", "master_seed"):
            if key in sec:
                fields[key] = sec.getint(key)
        for key in ("encoding", "observable", "entangler"):
            if key in sec:
                fields[key] = sec[key].strip()
        if "redraw_params" in sec:
            fields["redraw_params"] = sec.getboolean("redraw_params")
    if overrides.n is not None:
        fields["n_values"] = _parse_int_list(overrides.n)
    if overrides.d is not None:
        fields["d_values"] = _parse_int_list(overrides.d)
    if overrides.d_coeff is not None:
        fields["d_coeff"] = overrides.d_coeff
    if overrides.pairs is not None:
        fields["num_pairs"] = overrides.pairs
    if overrides.seed is not None:
        fields["master_seed"] = overrides.seed
    if overrides.encoding is not None:
        fields["encoding"] = overrides.encoding
    if overrides.observable is not None:
        fields["observable"] = overrides.observable
    if overrides.entangler is not None:
        fields["entangler"] = overrides.entangler
    if "n_values" not in fields:
        raise ValueError("no qubit counts given: set n_values in the config or pass --n")
    config = SweepConfig(**fields)
    bad = [n for n in config.n_values if n > MAX_QUBITS]
    if bad:
        raise ValueError(
            f"qubit counts {bad} exceed the supported maximum n <= {MAX_QUBITS}"
        )
    return config


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        config = load_sweep_config(args.config, args)
    except (ValueError, configparser.Error) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    started = datetime.now(timezone.utc).isoformat()
    result = run_sweep(config)
    finished = datetime.now(timezone.utc).isoformat()

    try:
        write_results_csv(args.out, result.records)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    status = [
        {"n": r.n, "d": r.d, "status": "ok"} for r in result.records
    ] + [
        {"n": f.n, "d": f.d, "status": "failed", "error": f.message}
        for f in result.failures
    ]
    status.sort(key=lambda c: (c["n"], c["d"]))
    manifest = {
        "config_hash": config_hash(config),
        "config": asdict(config),
        "master_seed": config.master_seed,
        "tool_version": __version__,
        "started": started,
        "finished": finished,
        "cells": status,
    }
    manifest_path = args.out + ".manifest.json"
    try:
        with open(manifest_path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        print(f"cannot write manifest: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    if result.failures:
        for f in result.failures:
            print(f"cell (n={f.n}, d={f.d}) failed: {f.message}", file=sys.stderr)
        print(f"wrote {len(result.records)} rows to {args.out} "
              f"({len(result.failures)} cells failed)")
        return EXIT_PARTIAL_FAILURE
    print(f"wrote {len(result.records)} rows to {args.out}")
    return EXIT_OK


def cmd_verify_moments(args: argparse.Namespace) -> int:
    if args.dim not in (2, 3, 4):
        print(f"dim must be 2, 3, or 4 (got {args.dim})", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    if args.samples < 1:
        print("samples must be >= 1", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    scale = np.sqrt(_MOMENT_REF_SAMPLES / args.samples)
    rng = np.random.default_rng(args.seed)
    ok = True
    lines = [f"dim={args.dim} samples={args.samples} seed={args.seed}"]
    for t, exact_fn, base_tol in (
        (1, weingarten_moment1, _MOMENT_TOL_T1),
        (2, weingarten_moment2, _MOMENT_TOL_T2),
    ):
        emp = empirical_moment(t, args.dim, args.samples, rng)
        exact = exact_fn(args.dim)
        dev = float(np.abs(emp.entries - exact.entries).max())
        tol = base_tol * scale
        passed = dev <= tol
        ok = ok and passed
        lines.append(f"t={t}: max deviation {dev:.6f}  tolerance {tol:.6f}  "
                     f"{'PASS' if passed else 'FAIL'}")
    report = "\n".join(lines) + "\n"
    print(report, end="")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report)
    return EXIT_OK if ok else EXIT_TOLERANCE_FAILURE


def cmd_expressibility(args: argparse.Namespace) -> int:
    cap = MAX_QUBITS_T1 if args.t == 1 else MAX_QUBITS_T2
    if not 1 <= args.n <= cap:
        print(f"t={args.t} supports 1..{cap} qubits (got n={args.n})", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    try:
        sampler = ensemble_sampler(args.ensemble, args.n)
        reference = LOCAL_HAAR if args.reference == "local" else GLOBAL_HAAR
        rng = np.random.default_rng(args.seed)
        report = measure(sampler, reference, args.t, args.n, args.samples, rng)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    out = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    print(out)
    return EXIT_OK


def _relative_gap(gd_norm: float, gap: float) -> float:
    if gd_norm < 1e-15:
        return gap
    return gap / gd_norm


def cmd_lazy(args: argparse.Namespace) -> int:
    if args.n < 1 or args.n > MAX_QUBITS:
        print(f"n must be in 1..{MAX_QUBITS} (got {args.n})", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    if args.d < 1 or args.points < 1 or args.steps < 0 or args.eta < 0:
        print("require d >= 1, points >= 1, steps >= 0, eta >= 0", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    obs = observable_from_name(args.observable)
    circuit = build_circuit(args.n, args.d)
    streams = np.random.SeedSequence(args.seed).spawn(args.points + 1)
    params = init_params(circuit, np.random.default_rng(streams[0]))
    dataset = [
        LabeledState(sample_haar_state(args.n, np.random.default_rng(s)))
        for s in streams[1:]
    ]
    kernel = gram_matrix(dataset, circuit, params, obs)
    eps_gd, _ = gd_train(dataset, circuit, params, obs, args.eta, args.steps)
    eps_lazy = lazy_dynamics(kernel, eps_gd[0], args.eta, args.steps)

    lines = ["step,residual_norm_gd,residual_norm_lazy,relative_gap"]
    max_gap = 0.0
    for t in range(args.steps + 1):
        norm_gd = float(np.linalg.norm(eps_gd[t]))
        norm_lazy = float(np.linalg.norm(eps_lazy[t]))
        gap = _relative_gap(norm_gd, float(np.linalg.norm(eps_gd[t] - eps_lazy[t])))
        max_gap = max(max_gap, gap)
        lines.append(f"{t},{_fmt(norm_gd)},{_fmt(norm_lazy)},{_fmt(gap)}")
    body = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(body)
        except OSError as exc:
            print(f"cannot write output: {exc}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
        print(f"wrote {args.steps + 1} steps to {args.out} "
              f"(max relative gap {max_gap:.4g})")
    else:
        sys.stdout.write(body)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qntk",
        description="Tangent-kernel concentration experiments for variational quantum circuits",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a Monte-Carlo (n, d) grid")
    p_sweep.add_argument("--config", help="INI config file with a [sweep] section")
    p_sweep.add_argument("--out", default="results.csv", help="output CSV path")
    p_sweep.add_argument("--n", help="qubit counts, e.g. '4,5,6' (overrides config)")
    p_sweep.add_argument("--d", help="block counts, e.g. '5,10' (overrides config)")
    p_sweep.add_argument("--d-coeff", type=int, default=None,
                         help="use d = coeff * n when no block counts are given")
    p_sweep.add_argument("--pairs", type=int, default=None, help="pairs per cell")
    p_sweep.add_argument("--seed", type=int, default=None, help="master seed")
    p_sweep.add_argument("--encoding", choices=[GLOBAL_HAAR, LOCAL_HAAR], default=None)
    p_sweep.add_argument("--observable", choices=[ZERO_PROJECTOR, PAULI_Y0], default=None)
    p_sweep.add_argument("--entangler", choices=["chain", "ring"], default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_vm = sub.add_parser("verify-moments", help="check Haar sampler moments")
    p_vm.add_argument("--dim", type=int, default=2, help="unitary dimension (2, 3, or 4)")
    p_vm.add_argument("--samples", type=int, default=_MOMENT_REF_SAMPLES)
    p_vm.add_argument("--seed", type=int, default=0)
    p_vm.add_argument("--out", help="also write the report here")
    p_vm.add_argument("--config", help=argparse.SUPPRESS)
    p_vm.set_defaults(func=cmd_verify_moments)

    p_ex = sub.add_parser("expressibility", help="trace-norm expressibility measure")
    p_ex.add_argument("--n", type=int, required=True, help="qubit count")
    p_ex.add_argument("--t", type=int, choices=[1, 2], default=1, help="moment order")
    p_ex.add_argument("--ensemble", default="haar",
                      choices=["haar", "local-haar", "singleton"])
    p_ex.add_argument("--reference", default="global", choices=["global", "local"])
    p_ex.add_argument("--samples", type=int, default=2000)
    p_ex.add_argument("--seed", type=int, default=0)
    p_ex.add_argument("--out", help="also write the JSON report here")
    p_ex.add_argument("--config", help=argparse.SUPPRESS)
    p_ex.set_defaults(func=cmd_expressibility)

    p_lazy = sub.add_parser("lazy", help="gradient descent vs linearized dynamics")
    p_lazy.add_argument("--n", type=int, default=4)
    p_lazy.add_argument("--d", type=int, default=50)
    p_lazy.add_argument("--points", type=int, default=1, help="dataset size")
    p_lazy.add_argument("--eta", type=float, default=0.01, help="learning rate")
    p_lazy.add_argument("--steps", type=int, default=50)
    p_lazy.add_argument("--seed", type=int, default=0)
    p_lazy.add_argument("--observable", choices=[ZERO_PROJECTOR, PAULI_Y0],
                        default=ZERO_PROJECTOR)
    p_lazy.add_argument("--out", help="trajectory CSV path (default: stdout)")
    p_lazy.add_argument("--config", help=argparse.SUPPRESS)
    p_lazy.set_defaults(func=cmd_lazy)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
