"""Command-line entry point: curve, check, flow, and pipes subcommands.

Every run emits a single JSON report (stdout, or ``--out PATH``) carrying the
envelope ``{command, version, N, M, seed}`` plus the command body, and a
one-line human summary on stderr.  The JSON is byte-identical for identical
configuration and seed: keys are sorted, the suite runners are deterministic,
and any randomized input (the flow command's default initial state) is drawn
from the seed alone.

Exit status: 0 when every check passed (or the command has nothing to check),
1 when a verification or tolerance failed, 2 for configuration errors —
including the dedicated non-coprime torus error — and argparse's own usage
errors.

``DKP_THREADS`` caps how many suite runners may execute concurrently; the
report assembly is single-threaded and ordered, so the output does not
depend on it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import __version__
from .curve import compute_curve
from .flows import KPStateNumeric, integrate, state_index
from .pipes import (
    enumerate_tpds,
    monomial_tpd_bijection,
    sum_zero_check,
    verify_pairing_consistency,
)
from .poisson import (
    closure_verify,
    qlink_report,
    verify_casimir1,
    verify_casimir2,
    verify_compatibility,
    verify_involution,
    verify_jacobi,
    verify_ladder,
)

SUITES = ("jacobi", "closure", "ladder", "involution", "compat", "casimir", "qlink")


def _threads_from_env() -> int:
    raw = os.environ.get("DKP_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation: torus, command, seed, and per-command knobs."""

    command: str
    N: int
    M: int
    seed: int = 0
    suite: str = "all"
    degree: int | None = None
    dt: float = 1e-3
    T: float = 1.0
    record_every: int | None = None
    state: str | None = None
    numeric: str | None = None
    out: str | None = None
    pairings: bool = False
    sum_zero: bool = False
    drift_tolerance: float = 1e-6
    threads: int = 1

    def __post_init__(self):
        if self.command not in ("curve", "check", "flow", "pipes"):
            raise ValueError(f"unknown command {self.command!r}")
        if self.N < 1 or self.M < 1:
            raise ValueError(f"N and M must be positive, got ({self.N}, {self.M})")
        g = math.gcd(self.N, self.M)
        if g != 1:
            raise ValueError(
                f"N and M must be coprime: gcd({self.N}, {self.M}) = {g}"
            )
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; pick from {sorted(SUITES + ('all',))}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.T < 0:
            raise ValueError(f"T must be nonnegative, got {self.T}")
        if self.record_every is not None and self.record_every < 1:
            raise ValueError(f"--record-every must be a positive step count, got {self.record_every}")
        if self.drift_tolerance <= 0:
            raise ValueError(f"drift tolerance must be positive, got {self.drift_tolerance}")
        if self.threads < 1:
            raise ValueError(f"thread cap must be at least 1, got {self.threads}")


# --------------------------------------------------------------------------
# report plumbing


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, frozenset):
        return sorted(obj)
    raise TypeError(f"not JSON serializable: {obj!r}")


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_state(path: str, N: int, M: int) -> KPStateNumeric:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ValueError(f"state file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"state file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or not {"N", "M", "A", "B"} <= set(data):
        raise ValueError(
            f"state file {path} must be a JSON object with keys N, M, A, B"
        )
    if int(data["N"]) != N or int(data["M"]) != M:
        raise ValueError(
            f"state file is for torus ({data['N']}, {data['M']}), not ({N}, {M})"
        )
    try:
        return KPStateNumeric(N, M, data["A"], data["B"], float(data.get("t", 0.0)))
    except Exception as exc:
        raise ValueError(f"state file {path} is not a valid state: {exc}") from None


# --------------------------------------------------------------------------
# subcommands


def _cmd_curve(cfg: RunConfig) -> tuple[dict, bool, str]:
    curve = compute_curve(cfg.N, cfg.M)
    body = curve.to_jsonable()
    if cfg.numeric:
        state = _load_state(cfg.numeric, cfg.N, cfg.M)
        flat = state.flat()
        values = {g: float(flat[i]) for g, i in state_index(cfg.N, cfg.M).items()}
        body["values"] = {
            f"q_{d}": float(curve.q(d).evaluate(values)) for d in curve.degrees()
        }
    summary = (
        f"curve ({cfg.N},{cfg.M}): {len(curve.degrees())} conserved quantities,"
        f" degrees {curve.degrees()}"
    )
    return body, True, summary


def _check_jobs(cfg: RunConfig) -> list[tuple[str, Callable[[], dict]]]:
    N, M = cfg.N, cfg.M
    wanted = SUITES if cfg.suite == "all" else (cfg.suite,)
    jobs: list[tuple[str, Callable[[], dict]]] = []
    for suite in wanted:
        if suite == "jacobi":
            jobs.append(("jacobi", lambda: verify_jacobi(N, M)))
        elif suite == "closure":
            for j in range(1, M + 1):
                jobs.append((f"closure-level-{j}", lambda j=j: closure_verify(N, M, j)))
        elif suite == "ladder":
            jobs.append(("ladder", lambda: verify_ladder(N, M)))
        elif suite == "involution":
            jobs.append(("involution", lambda: verify_involution(N, M)))
        elif suite == "compat":
            jobs.append(("compat", lambda: verify_compatibility(N, M)))
        elif suite == "casimir":
            jobs.append(("casimir1", lambda: verify_casimir1(N, M)))
            jobs.append(("casimir2", lambda: verify_casimir2(N, M)))
        elif suite == "qlink":
            jobs.append(("qlink", lambda: qlink_report(N, M)))
    return jobs


def _normalize_check(name: str, report: dict) -> dict:
    if name == "qlink":
        cases, failures = report["slot_checks"], report["slot_failures"]
    else:
        cases, failures = report["cases"], report["failures"]
    return {"name": name, "cases": cases, "failures": list(failures), "ok": bool(report["ok"])}


def _cmd_check(cfg: RunConfig) -> tuple[dict, bool, str]:
    jobs = _check_jobs(cfg)
    if cfg.threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=min(cfg.threads, len(jobs))) as pool:
            raw = list(pool.map(lambda job: job[1](), jobs))
    else:
        raw = [fn() for _, fn in jobs]
    checks = [_normalize_check(name, r) for (name, _), r in zip(jobs, raw)]
    failures = [
        {"check": c["name"], "detail": f} for c in checks for f in c["failures"]
    ]
    cases = sum(c["cases"] for c in checks)
    ok = not failures and all(c["ok"] for c in checks)
    body = {
        "suite": cfg.suite,
        "checks": [
            {"name": c["name"], "cases": c["cases"], "failures": len(c["failures"]), "ok": c["ok"]}
            for c in checks
        ],
        "cases": cases,
        "failures": failures,
        "ok": ok,
    }
    summary = f"check {cfg.suite} on ({cfg.N},{cfg.M}): {cases} cases, {len(failures)} failures"
    return body, ok, summary


def _cmd_flow(cfg: RunConfig) -> tuple[dict, bool, str]:
    if cfg.state:
        state = _load_state(cfg.state, cfg.N, cfg.M)
    else:
        state = KPStateNumeric.random(cfg.N, cfg.M, cfg.seed)
    degree = 1 if cfg.degree is None else cfg.degree
    result = integrate(state, degree, cfg.dt, cfg.T, cfg.record_every)
    ok = result.max_drift <= cfg.drift_tolerance
    body = {
        "degree": degree,
        "dt": cfg.dt,
        "T": cfg.T,
        "steps": result.steps,
        "drift": {f"q_{d}": v for d, v in sorted(result.drift.items())},
        "max_drift": result.max_drift,
        "drift_tolerance": cfg.drift_tolerance,
        "within_tolerance": ok,
        "state_initial": state.to_jsonable(),
        "state_final": result.state.to_jsonable(),
    }
    if cfg.record_every:
        body["trajectory"] = result.trajectory
    summary = (
        f"flow ({cfg.N},{cfg.M}) degree {degree}: {result.steps} steps,"
        f" max relative drift {result.max_drift:.3e}"
    )
    return body, ok, summary


def _cmd_pipes(cfg: RunConfig) -> tuple[dict, bool, str]:
    N, M = cfg.N, cfg.M
    bijection = monomial_tpd_bijection(N, M)
    body: dict = {
        "bijection": {
            "per_degree": {str(d): dict(v) for d, v in sorted(bijection["per_degree"].items())},
            "total_monomials": bijection["total_monomials"],
            "total_diagrams": bijection["total_diagrams"],
            "ok": bijection["ok"],
        },
    }
    ok = bool(bijection["ok"])
    parts = [f"bijection {'ok' if ok else 'FAILED'} ({bijection['total_diagrams']} diagrams)"]
    if cfg.degree is not None:
        diagrams = enumerate_tpds(N, M, cfg.degree)
        body["degree"] = cfg.degree
        body["diagrams"] = [d.to_jsonable() for d in diagrams]
        parts.append(f"{len(diagrams)} diagrams of degree {cfg.degree}")
    if cfg.pairings:
        pairing_report = verify_pairing_consistency(N, M)
        body["pairings"] = {
            "diagrams": pairing_report["diagrams"],
            "pairs": pairing_report["pairs"],
            "failures": pairing_report["failures"],
            "ok": pairing_report["ok"],
        }
        ok = ok and bool(pairing_report["ok"])
        parts.append(
            f"pairing formulas agree on {pairing_report['pairs']} pairs"
            if pairing_report["ok"]
            else f"pairing formulas DISAGREE on {len(pairing_report['failures'])} pairs"
        )
    if cfg.sum_zero:
        reports = []
        zero_ok = True
        for d1 in range(N * M + 1):
            for d2 in range(d1, N * M + 1):
                r = sum_zero_check(N, M, d1, d2)
                reports.append(
                    {
                        "degrees": list(r["degrees"]),
                        "pairs": r["pairs"],
                        "groups": r["groups"],
                        "nonzero_pairings": r["nonzero_pairings"],
                        "nonzero_groups": r["nonzero_groups"],
                        "ok": r["ok"],
                    }
                )
                zero_ok = zero_ok and bool(r["ok"])
        body["sum_zero"] = {"pairs": reports, "ok": zero_ok}
        ok = ok and zero_ok
        parts.append("all product groups sum to zero" if zero_ok else "sum-zero FAILED")
    summary = f"pipes ({N},{M}): " + "; ".join(parts)
    return body, ok, summary


_HANDLERS = {
    "curve": _cmd_curve,
    "check": _cmd_check,
    "flow": _cmd_flow,
    "pipes": _cmd_pipes,
}


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dkp",
        description=(
            "Exact verification toolkit for the discrete KP hierarchy on an"
            " N-by-M torus: spectral curve and conserved-quantity ledger,"
            " Poisson-bracket identity suites, numeric flows, and pipe-diagram"
            " combinatorics."
        ),
    )
    parser.add_argument("--version", action="version", version=f"dkp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="{curve,check,flow,pipes}")

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--N", type=int, required=True, help="sites per row of the torus")
        p.add_argument("--M", type=int, required=True, help="rows of the torus; gcd(N, M) must be 1")
        p.add_argument("--seed", type=int, default=0, help="64-bit seed for any randomized input (default 0)")
        p.add_argument("--out", metavar="PATH", help="write the JSON report to PATH instead of stdout")

    p = sub.add_parser("curve", help="spectral curve coefficients and conserved-quantity ledger")
    common(p)
    p.add_argument("--numeric", metavar="PATH", help="JSON state file; adds numeric values of every ledger quantity")

    p = sub.add_parser("check", help="run exact verification suites")
    common(p)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all", help="which suite to run (default all)")

    p = sub.add_parser("flow", help="integrate a hierarchy flow and report conserved-quantity drift")
    common(p)
    p.add_argument("--degree", type=int, default=1, help="ledger degree generating the flow (default 1)")
    p.add_argument("--dt", type=float, default=1e-3, help="RK4 step size (default 1e-3)")
    p.add_argument("--T", type=float, default=1.0, help="integration horizon (default 1.0)")
    p.add_argument("--record-every", type=int, metavar="K", help="include the trajectory, sampled every K steps")
    p.add_argument("--state", metavar="PATH", help="JSON initial state {N, M, t, A, B}; default is seeded uniform [0.5, 1.5]")
    p.add_argument("--drift-tolerance", type=float, default=1e-6, help="max relative drift for exit status 0 (default 1e-6)")

    p = sub.add_parser("pipes", help="pipe-diagram enumeration, monomial bijection, pairing checks")
    common(p)
    p.add_argument("--degree", type=int, help="also list every diagram of this degree as a site-to-piece map")
    p.add_argument("--pairings", action="store_true", help="cross-check the knee-count and bracket-kernel pairing formulas on all pairs")
    p.add_argument("--sum-zero", action="store_true", dest="sum_zero", help="verify every product group sums to zero, all degree pairs")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        N=args.N,
        M=args.M,
        seed=getattr(args, "seed", 0),
        suite=getattr(args, "suite", "all"),
        degree=getattr(args, "degree", None),
        dt=getattr(args, "dt", 1e-3),
        T=getattr(args, "T", 1.0),
        record_every=getattr(args, "record_every", None),
        state=getattr(args, "state", None),
        numeric=getattr(args, "numeric", None),
        out=getattr(args, "out", None),
        pairings=getattr(args, "pairings", False),
        sum_zero=getattr(args, "sum_zero", False),
        drift_tolerance=getattr(args, "drift_tolerance", 1e-6),
        threads=_threads_from_env(),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        body, ok, summary = _HANDLERS[cfg.command](cfg)
    except (ValueError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": cfg.command,
        "version": __version__,
        "N": cfg.N,
        "M": cfg.M,
        "seed": cfg.seed,
        **body,
    }
    _emit(report, cfg.out)
    print(summary, file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
