"""Numeric hierarchy flows and conservation-drift monitoring.

Flows run on double-precision A, B arrays.  Two independent right-side
routes exist: the first flow evaluated directly from the sign-table
evolution equations, and any ledger flow d obtained by compiling the
symbolic bracket {g, q_d}_2 once per (N, M, d) into a coefficient/exponent
table (for d = 1 the two routes agree to machine precision, which the
tests pin).  Integration is fixed-step classical RK4 for reproducible
drift numbers; every ledger quantity is evaluated per step and its maximal
relative drift reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from dkp.curve import SpectralCurve, compute_curve
from dkp.poisson import bracket2_AB, bracket_extend, first_flow_rhs_AB
from dkp.symalg import ExactPoly, Gen, gen_A, gen_B
from dkp.torus import build_kappa, build_rho


def _require_torus(N: int, M: int) -> None:
    if N < 1 or M < 1 or math.gcd(N, M) != 1:
        raise ValueError(f"torus dimensions must be coprime positive, got ({N}, {M})")


@dataclass
class KPStateNumeric:
    """Double-precision phase-space point: A[m][n], B[m][n], time t."""

    N: int
    M: int
    A: np.ndarray
    B: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float).reshape(self.M, self.N)
        self.B = np.asarray(self.B, dtype=float).reshape(self.M, self.N)
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.B))):
            raise ValueError("state entries must be finite")

    @classmethod
    def random(cls, N: int, M: int, seed: int, low: float = 0.5, high: float = 1.5):
        _require_torus(N, M)
        rng = np.random.default_rng(seed)
        return cls(
            N, M, rng.uniform(low, high, (M, N)), rng.uniform(low, high, (M, N))
        )

    @classmethod
    def zero(cls, N: int, M: int):
        _require_torus(N, M)
        return cls(N, M, np.zeros((M, N)), np.zeros((M, N)))

    def flat(self) -> np.ndarray:
        return np.concatenate([self.A.ravel(), self.B.ravel()])

    @classmethod
    def from_flat(cls, N: int, M: int, flat: np.ndarray, t: float = 0.0):
        nm = N * M
        return cls(N, M, flat[:nm].reshape(M, N), flat[nm:].reshape(M, N), t)

    def to_jsonable(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "t": self.t,
            "A": self.A.tolist(),
            "B": self.B.tolist(),
        }


def state_index(N: int, M: int) -> dict[Gen, int]:
    """Generator -> position in the flattened state vector."""
    idx: dict[Gen, int] = {}
    for m in range(M):
        for n in range(N):
            idx[gen_A(n, m)] = m * N + n
            idx[gen_B(n, m)] = N * M + m * N + n
    return idx


class CompiledPoly:
    """Coefficient/exponent-table evaluation of a polynomial on flat states."""

    __slots__ = ("coeffs", "exps")

    def __init__(self, poly: ExactPoly, index: dict[Gen, int]):
        rows, coeffs = [], []
        for mono, q in poly.terms.items():
            e = np.zeros(len(index), dtype=np.int64)
            for g, k in mono:
                e[index[g]] = k
            rows.append(e)
            coeffs.append(float(q))
        self.exps = (
            np.array(rows, dtype=np.int64)
            if rows
            else np.zeros((0, len(index)), dtype=np.int64)
        )
        self.coeffs = np.array(coeffs, dtype=float)

    def __call__(self, flat: np.ndarray) -> float:
        if not self.coeffs.size:
            return 0.0
        return float(self.coeffs @ np.prod(flat**self.exps, axis=1))


@lru_cache(maxsize=None)
def _ab_curve(N: int, M: int) -> SpectralCurve:
    return compute_curve(N, M, "AB")


@lru_cache(maxsize=None)
def _compiled_ledger(N: int, M: int) -> dict[int, CompiledPoly]:
    curve = _ab_curve(N, M)
    index = state_index(N, M)
    return {d: CompiledPoly(curve.q(d), index) for d in curve.degrees()}


@lru_cache(maxsize=None)
def _compiled_flow(N: int, M: int, degree: int) -> list[CompiledPoly]:
    """Compiled dg/dt = {g, q_degree}_2 for every generator g, state order."""
    curve = _ab_curve(N, M)
    if degree not in curve.ledger:
        raise ValueError(
            f"degree {degree} is not in the ({N},{M}) ledger {curve.degrees()}"
        )
    table = bracket2_AB(N, M)
    index = state_index(N, M)
    qd = curve.q(degree)
    order = sorted(index, key=index.get)
    return [
        CompiledPoly(bracket_extend(table, ExactPoly.var(g), qd), index)
        for g in order
    ]


@lru_cache(maxsize=None)
def _first_flow_tables(N: int, M: int) -> tuple[np.ndarray, np.ndarray]:
    kappa, rho = build_kappa(N, M), build_rho(N, M)
    kt = np.array([[kappa(n, m) for n in range(N)] for m in range(M)], dtype=float)
    rt = np.array([[rho(n, m) for n in range(N)] for m in range(M)], dtype=float)
    return kt, rt


def _first_flow_flat(N: int, M: int, flat: np.ndarray) -> np.ndarray:
    A = flat[: N * M].reshape(M, N)
    B = flat[N * M :].reshape(M, N)
    kt, rt = _first_flow_tables(N, M)
    dA = np.empty((M, N))
    dB = np.empty((M, N))
    for m in range(M):
        for n in range(N):
            # table[(l-m) % M, (k-n) % N] against A[l, k]
            ksum = sum(
                kt[(l - m) % M, (k - n) % N] * A[l, k]
                for l in range(M)
                for k in range(N)
            )
            rsum = sum(
                rt[(l - m) % M, (k - n) % N] * A[l, k]
                for l in range(M)
                for k in range(N)
            )
            dA[m, n] = B[m, n] - B[m, (n + 1) % N] + ksum * A[m, n]
            dB[m, n] = rsum * B[m, n]
    return np.concatenate([dA.ravel(), dB.ravel()])


def first_flow_rhs_numeric(state: KPStateNumeric) -> np.ndarray:
    """Direct evaluation of the evolution equations (independent of brackets).

    dA(n,m) = B(n,m) - B(n+1,m) + (sum_{k,l} kappa(k-n, l-m) A(k,l)) A(n,m)
    dB(n,m) = (sum_{k,l} rho(k-n, l-m) A(k,l)) B(n,m)
    """
    return _first_flow_flat(state.N, state.M, state.flat())


def _rhs_fn(N: int, M: int, flow):
    """Flat-array tangent evaluator for "first" or a ledger degree."""
    if flow == "first":
        return lambda flat: _first_flow_flat(N, M, flat)
    compiled = _compiled_flow(N, M, int(flow))
    return lambda flat: np.array([p(flat) for p in compiled])


def flow_rhs(degree, state: KPStateNumeric) -> np.ndarray:
    """Tangent vector of flow `degree` ("first" or a ledger degree) at state."""
    _require_torus(state.N, state.M)
    return _rhs_fn(state.N, state.M, degree)(state.flat())


@dataclass
class IntegrationResult:
    state: KPStateNumeric
    steps: int
    dt: float
    q_initial: dict[int, float]
    q_final: dict[int, float]
    drift: dict[int, float]
    trajectory: list[dict] = field(default_factory=list)

    @property
    def max_drift(self) -> float:
        return max(self.drift.values()) if self.drift else 0.0

    def to_jsonable(self) -> dict:
        out = {
            "steps": self.steps,
            "dt": self.dt,
            "state": self.state.to_jsonable(),
            "q_initial": {str(d): v for d, v in self.q_initial.items()},
            "q_final": {str(d): v for d, v in self.q_final.items()},
            "drift": {str(d): v for d, v in self.drift.items()},
        }
        if self.trajectory:
            out["trajectory"] = self.trajectory
        return out


def integrate(
    state: KPStateNumeric,
    flow,
    dt: float,
    T: float,
    record_every: int | None = None,
) -> IntegrationResult:
    """Fixed-step RK4 with per-step evaluation of every ledger quantity.

    `flow` is "first" or a ledger degree.  Raises on non-finite states.
    Relative drift of q_d uses |q_d(0)| as the scale (floored at 1e-12).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if T < 0:
        raise ValueError("T must be nonnegative")
    N, M = state.N, state.M
    ledger = _compiled_ledger(N, M)
    rhs = _rhs_fn(N, M, flow)
    flat = state.flat()
    q0 = {d: p(flat) for d, p in ledger.items()}
    drift = {d: 0.0 for d in ledger}
    scale = {d: max(abs(v), 1e-12) for d, v in q0.items()}
    steps = int(round(T / dt))
    trajectory: list[dict] = []

    def snap(i: int, f: np.ndarray):
        trajectory.append(
            {"t": state.t + i * dt, "state": KPStateNumeric(N, M, f[: N * M], f[N * M :]).to_jsonable()}
        )

    if record_every:
        snap(0, flat)
    for i in range(1, steps + 1):
        k1 = rhs(flat)
        k2 = rhs(flat + 0.5 * dt * k1)
        k3 = rhs(flat + 0.5 * dt * k2)
        k4 = rhs(flat + dt * k3)
        flat = flat + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(flat)):
            raise FloatingPointError(f"state became non-finite at step {i}")
        for d, p in ledger.items():
            drift[d] = max(drift[d], abs(p(flat) - q0[d]) / scale[d])
        if record_every and (i % record_every == 0 or i == steps):
            snap(i, flat)
    qf = {d: p(flat) for d, p in ledger.items()}
    final = KPStateNumeric(N, M, flat[: N * M], flat[N * M :], state.t + steps * dt)
    return IntegrationResult(final, steps, dt, q0, qf, drift, trajectory)
