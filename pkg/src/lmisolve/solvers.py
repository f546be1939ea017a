"""Restarted first-order solvers.

Four drivers share two inner engines and one restart loop:

- solve_nonsmooth: projected subgradient phases of K = ceil(4 M^2 mu^2)
  steps, step length mu f(x_phase_start) / (M sqrt(K));
- solve_smooth: accelerated-gradient phases of K = ceil(4 mu ||A||) steps;
- solve_linsys: accelerated-gradient phases of K = ceil(sqrt(8 ||A||^2 L_H^2))
  steps on the clipped-residual objective;
- solve_bundle: bundle-level phases (gap reduction) that run until the
  upper bound halves, needing no Lipschitz or error-bound input.

Each phase halves the objective on instances where the error-bound modulus
mu (or the Hoffman constant L_H) is valid, which yields linear convergence;
over-estimating mu or L_H only lengthens phases and preserves halving.

The accelerated scheme is fixed as: theta_t = 2/(t+1),
y = (1-theta) xbar + theta z, xbar <- y - grad/L, z <- z - (t+1)/(2L) grad,
with z_0 = xbar_0 = x_0. It satisfies
f(xbar_K) - f* <= 2 L d^2(x_0, X*) / (K (K+1)), the inequality all restart
budgets here are sized against.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InfeasibleLevel,
    InvalidParameter,
    IterationCapReached,
    NonFiniteInput,
)
from .model import LinIneqSystem, LmiProblem, constants
from .objectives import Oracle, linsys_oracle, nonsmooth_oracle, smooth_oracle

__all__ = [
    "DEFAULT_CAP",
    "StepsizePolicy",
    "HARMONIC",
    "RECURSIVE",
    "stepsizes",
    "stepsize_schedule",
    "TraceRow",
    "PhaseRecord",
    "SolveTrace",
    "SolveStatus",
    "SolveResult",
    "subgradient_phase",
    "accelerated_phase",
    "level_project",
    "gap_reduction",
    "solve_nonsmooth",
    "solve_smooth",
    "solve_bundle",
    "solve_linsys",
]

DEFAULT_CAP = 10_000_000


# ---------------------------------------------------------------------------
# stepsize policies


@dataclass(frozen=True)
class StepsizePolicy:
    """Bundle stepsize rule with the constants (C1, C2, C3) for which
    alpha_t^2 / Gamma_t <= C1, Gamma_t <= C2 / t^2 and
    Gamma_t sqrt(sum_tau (alpha_tau / Gamma_tau)^2) <= C3 / sqrt(t)."""

    kind: str
    c1: float
    c2: float
    c3: float


HARMONIC = StepsizePolicy("harmonic", 2.0, 2.0, 2.0 / math.sqrt(3.0))
RECURSIVE = StepsizePolicy("recursive", 1.0, 4.0, 4.0 / math.sqrt(3.0))


def _check_policy(policy):
    if not isinstance(policy, StepsizePolicy) or policy.kind not in ("harmonic", "recursive"):
        raise InvalidParameter("policy must be HARMONIC or RECURSIVE")


def stepsize_schedule(policy: StepsizePolicy):
    """Generator of (alpha_t, Gamma_t) for t = 1, 2, ... in O(1) per step."""
    _check_policy(policy)
    if policy.kind == "harmonic":
        t = 1
        while True:
            yield 2.0 / (t + 1.0), 2.0 / (t * (t + 1.0))
            t += 1
    else:
        yield 1.0, 1.0
        gamma = 1.0
        while True:
            # positive root of alpha^2 + Gamma alpha - Gamma = 0
            alpha = 0.5 * (math.sqrt(gamma * gamma + 4.0 * gamma) - gamma)
            gamma = alpha * alpha
            yield alpha, gamma


def stepsizes(policy: StepsizePolicy, t: int) -> tuple[float, float]:
    """(alpha_t, Gamma_t) for a single index t >= 1.

    HARMONIC has the closed form alpha_t = 2/(t+1), Gamma_t = 2/(t(t+1));
    RECURSIVE sets alpha_1 = Gamma_1 = 1 and then alpha_t as the positive
    root of alpha^2 + Gamma_{t-1} alpha - Gamma_{t-1} = 0 with
    Gamma_t = alpha_t^2, so the cost is O(t).
    """
    if not isinstance(t, (int, np.integer)) or t < 1:
        raise InvalidParameter(f"t must be a positive integer, got {t!r}")
    if policy.kind == "harmonic":
        _check_policy(policy)
        return 2.0 / (t + 1.0), 2.0 / (t * (t + 1.0))
    sched = stepsize_schedule(policy)
    for _ in range(t - 1):
        next(sched)
    return next(sched)


# ---------------------------------------------------------------------------
# traces and results


@dataclass(frozen=True)
class TraceRow:
    """One inner iteration: phase and within-phase indices are 1-based."""

    phase: int
    iter: int
    total_iter: int
    f_value: float
    elapsed_ms: float


@dataclass(frozen=True, eq=False)
class PhaseRecord:
    """One restart phase. `completed` means the phase reached its planned
    budget (restarted methods) or its halving target (bundle); phases cut
    short by eps or by the iteration cap are not completed. prox_travel and
    level_violation are filled by bundle phases only."""

    index: int
    f_start: float
    f_end: float
    iterations: int
    completed: bool
    start_point: np.ndarray
    prox_travel: float | None = None
    level_violation: float | None = None


@dataclass
class SolveTrace:
    rows: list = field(default_factory=list)
    phases: list = field(default_factory=list)


class SolveStatus(enum.Enum):
    SOLVED = "Solved"
    ITERATION_CAP = "IterationCapReached"


@dataclass(frozen=True, eq=False)
class SolveResult:
    solution: np.ndarray
    value: float
    iterations: int
    phases: int
    trace: SolveTrace
    status: SolveStatus


class _Recorder:
    """Collects trace rows against a global iteration cap."""

    __slots__ = ("cap", "rows", "phases", "total", "t0")

    def __init__(self, cap):
        self.cap = cap
        self.rows = []
        self.phases = []
        self.total = 0
        self.t0 = time.perf_counter()

    def remaining(self):
        return self.cap - self.total

    def row(self, phase, it, value):
        self.total += 1
        self.rows.append(
            TraceRow(phase, it, self.total, float(value), (time.perf_counter() - self.t0) * 1e3)
        )


def _point(x, dim):
    if x is None:
        return np.zeros(dim)
    v = np.asarray(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1 or v.shape[0] != dim:
        raise InvalidParameter(f"starting point must be a vector of length {dim}")
    if not np.isfinite(v).all():
        raise NonFiniteInput("starting point contains NaN or Inf")
    return v.copy()


def _check_params(eps, cap):
    if not eps > 0.0:
        raise InvalidParameter(f"eps must be positive, got {eps}")
    if not isinstance(cap, (int, np.integer)) or cap < 1:
        raise InvalidParameter(f"cap must be a positive integer, got {cap!r}")


def _budget(value):
    """Restart length: ceiling, clamped to at least one step."""
    return max(1, math.ceil(value))


# ---------------------------------------------------------------------------
# inner engines


def _subgradient_steps(oracle, x, K, gamma, eps, rec, phase):
    """K constant-step subgradient steps; best of the new iterates."""
    step = gamma / math.sqrt(K)
    cur = x
    g = oracle.evaluate(cur).gradient
    best = None
    best_f = math.inf
    for i in range(1, K + 1):
        if rec.remaining() <= 0:
            return (x if best is None else best), best_f, False, None, None
        cur = cur - step * g
        ev = oracle.evaluate(cur)
        rec.row(phase, i, ev.value)
        if ev.value < best_f:
            best, best_f = cur, float(ev.value)
        g = ev.gradient
        if eps is not None and ev.value <= eps:
            return best, best_f, i == K, None, None
    return best, best_f, True, None, None


def _accelerated_steps(oracle, lip, x, K, eps, rec, phase):
    """K accelerated-gradient steps from x; returns the last xbar, or the
    probe point y_t if its value already meets eps."""
    xbar = x
    z = x
    for t in range(1, K + 1):
        if rec.remaining() <= 0:
            return xbar, None, False, None, None
        theta = 2.0 / (t + 1.0)
        y = (1.0 - theta) * xbar + theta * z
        ev = oracle.evaluate(y)
        rec.row(phase, t, ev.value)
        if eps is not None and ev.value <= eps:
            return y, float(ev.value), t == K, None, None
        xbar = y - ev.gradient / lip
        z = z - ((t + 1.0) / (2.0 * lip)) * ev.gradient
    return xbar, None, True, None, None


def _gap_reduction_steps(oracle, x0u, fbar0, level, policy, eps, rec, phase):
    """Bundle-level gap reduction: run until the upper bound halves."""
    x_prev = x0u
    xu = x0u
    fbar = float(fbar0)
    target = 0.5 * fbar0
    travel = 0.0
    viol = 0.0
    sched = stepsize_schedule(policy)
    t = 0
    while True:
        if rec.remaining() <= 0:
            return xu, fbar, fbar <= target, travel, viol
        t += 1
        alpha, _ = next(sched)
        xl = (1.0 - alpha) * xu + alpha * x_prev
        evl = oracle.evaluate(xl)
        g = evl.gradient
        h_prev = evl.value + float(g @ (x_prev - xl))
        if h_prev > level:
            gg = float(g @ g)
            if gg == 0.0:
                raise InfeasibleLevel(
                    "cutting model sits above the level with zero subgradient"
                )
            x_new = x_prev - ((h_prev - level) / gg) * g
            d = x_new - x_prev
            travel += float(d @ d)
            viol = max(viol, evl.value + float(g @ (x_new - xl)) - level)
        else:
            x_new = x_prev
        xtilde = alpha * x_new + (1.0 - alpha) * xu
        evu = oracle.evaluate(xtilde)
        if evu.value <= fbar:
            xu = xtilde
            fbar = float(evu.value)
        rec.row(phase, t, fbar)
        x_prev = x_new
        if fbar <= target or (eps is not None and fbar <= eps):
            return xu, fbar, fbar <= target, travel, viol


# ---------------------------------------------------------------------------
# public single-phase operations


def subgradient_phase(oracle: Oracle, x0, K: int, gamma: float):
    """Run K constant-step subgradient iterations x <- x - (gamma/sqrt(K)) g
    and return (best_point, best_value) over the K new iterates."""
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise InvalidParameter(f"K must be a positive integer, got {K!r}")
    if not gamma > 0.0:
        raise InvalidParameter(f"gamma must be positive, got {gamma}")
    x = _point(x0, oracle.dim)
    best, best_f, _, _, _ = _subgradient_steps(
        oracle, x, int(K), float(gamma), None, _Recorder(int(K)), 1
    )
    return best, best_f


def accelerated_phase(oracle: Oracle, L: float, x0, K: int):
    """Run K accelerated-gradient iterations from x0 and return the final
    point, which satisfies f(x_K) - f* <= 2 L d^2(x0, X*) / (K (K+1))."""
    if not L > 0.0:
        raise InvalidParameter(f"L must be positive, got {L}")
    if not isinstance(K, (int, np.integer)) or K < 1:
        raise InvalidParameter(f"K must be a positive integer, got {K!r}")
    x = _point(x0, oracle.dim)
    out, _, _, _, _ = _accelerated_steps(oracle, float(L), x, int(K), None, _Recorder(int(K)), 1)
    return out


def level_project(x_prev, z, fz, g, level):
    """Project x_prev onto the halfspace {x : fz + <g, x - z> <= level}.

    Returns x_prev unchanged when it already satisfies the constraint.
    Raises InfeasibleLevel when the model sits above the level with g = 0,
    in which case no point can reach it.
    """
    x_prev = np.asarray(x_prev, dtype=float)
    z = np.asarray(z, dtype=float)
    g = np.asarray(g, dtype=float)
    if not np.isfinite(g).all():
        raise NonFiniteInput("subgradient contains NaN or Inf")
    h = float(fz) + float(g @ (x_prev - z))
    if h <= level:
        return x_prev.copy()
    gg = float(g @ g)
    if gg == 0.0:
        raise InfeasibleLevel("cutting model sits above the level with zero subgradient")
    return x_prev - ((h - level) / gg) * g


def gap_reduction(oracle: Oracle, x0u, level: float, policy: StepsizePolicy,
                  cap: int = DEFAULT_CAP):
    """Bundle-level gap reduction from x0u: iterate cut/project/average
    until the upper bound f(x_t_u) drops to half of f(x0u).

    Returns (xbar, iterations). Raises IterationCapReached when cap runs
    out first and InfeasibleLevel when a cut degenerates (level below the
    model minimum).
    """
    _check_policy(policy)
    if not isinstance(cap, (int, np.integer)) or cap < 1:
        raise InvalidParameter(f"cap must be a positive integer, got {cap!r}")
    x = _point(x0u, oracle.dim)
    rec = _Recorder(int(cap))
    f0 = float(oracle.evaluate(x).value)
    xbar, _, completed, _, _ = _gap_reduction_steps(
        oracle, x, f0, float(level), policy, None, rec, 1
    )
    if not completed:
        raise IterationCapReached(f"gap reduction exhausted the cap of {cap} iterations")
    return xbar, rec.total


# ---------------------------------------------------------------------------
# restarted drivers


def _restart(oracle, x0, eps, cap, phase_fn):
    x = _point(x0, oracle.dim)
    rec = _Recorder(int(cap))
    fx = float(oracle.evaluate(x).value)
    status = SolveStatus.SOLVED
    while fx > eps:
        if rec.remaining() <= 0:
            status = SolveStatus.ITERATION_CAP
            break
        idx = len(rec.phases) + 1
        before = rec.total
        start = x.copy()
        cand, cand_f, completed, travel, viol = phase_fn(x, fx, rec, idx)
        if cand_f is None:
            cand_f = float(oracle.evaluate(cand).value)
        rec.phases.append(
            PhaseRecord(idx, fx, cand_f, rec.total - before, completed, start, travel, viol)
        )
        # restart from the candidate only if it actually improved
        if cand_f < fx:
            x, fx = cand, cand_f
        if fx > eps and rec.remaining() <= 0:
            status = SolveStatus.ITERATION_CAP
            break
    return SolveResult(
        solution=x,
        value=fx,
        iterations=rec.total,
        phases=len(rec.phases),
        trace=SolveTrace(rec.rows, rec.phases),
        status=status,
    )


def solve_nonsmooth(p: LmiProblem, mu: float, eps: float, cap: int = DEFAULT_CAP,
                    *, x0=None) -> SolveResult:
    """Restarted subgradient method on max(lambda_max(A(x) - B), 0).

    Each phase runs K = ceil(4 M^2 mu^2) steps with constant step length
    gamma / sqrt(K), gamma = mu f(x_start) / M recomputed at each restart,
    and restarts from the best iterate; each completed phase halves the
    objective when mu is a valid error-bound modulus.
    """
    if not mu > 0.0:
        raise InvalidParameter(f"mu must be positive, got {mu}")
    _check_params(eps, cap)
    oracle = nonsmooth_oracle(p)
    m_bound = oracle.subgrad_bound
    K = _budget(4.0 * m_bound * m_bound * mu * mu)

    def phase(x, fx, rec, idx):
        if m_bound <= 0.0:
            raise InvalidParameter("all coefficient matrices are zero; the objective is constant")
        gamma = mu * fx / m_bound
        return _subgradient_steps(oracle, x, K, gamma, eps, rec, idx)

    return _restart(oracle, x0, eps, cap, phase)


def solve_smooth(p: LmiProblem, mu: float, eps: float, cap: int = DEFAULT_CAP,
                 *, x0=None) -> SolveResult:
    """Restarted accelerated gradient method on the squared cone distance.

    Each phase runs K = ceil(4 mu ||A||) accelerated steps with
    L = 2 ||A||^2 and restarts from the final point.
    """
    if not mu > 0.0:
        raise InvalidParameter(f"mu must be positive, got {mu}")
    _check_params(eps, cap)
    oracle = smooth_oracle(p)
    opnorm = constants(p).opnorm
    K = _budget(4.0 * mu * opnorm)

    def phase(x, fx, rec, idx):
        if oracle.grad_lipschitz <= 0.0:
            raise InvalidParameter("all coefficient matrices are zero; the objective is constant")
        return _accelerated_steps(oracle, oracle.grad_lipschitz, x, K, eps, rec, idx)

    return _restart(oracle, x0, eps, cap, phase)


def solve_bundle(oracle: Oracle, p0, eps: float, policy: StepsizePolicy = HARMONIC,
                 cap: int = DEFAULT_CAP) -> SolveResult:
    """Restarted bundle-level method: repeat gap reduction (level 0) until
    the upper bound reaches eps. Needs no smoothness or error-bound input;
    stepsizes reset to alpha_1 = 1 at the start of every phase."""
    _check_params(eps, cap)
    _check_policy(policy)

    def phase(x, fx, rec, idx):
        return _gap_reduction_steps(oracle, x, fx, 0.0, policy, eps, rec, idx)

    return _restart(oracle, p0, eps, cap, phase)


def solve_linsys(sys: LinIneqSystem, LH: float, eps: float, cap: int = DEFAULT_CAP,
                 *, x0=None) -> SolveResult:
    """Restarted accelerated gradient method on 0.5 ||e(Ax - b)||^2.

    Each phase runs K = ceil(sqrt(8 ||A||^2 L_H^2)) steps with L = ||A||^2;
    halving per phase holds when L_H is a valid Hoffman constant.
    """
    if not LH > 0.0:
        raise InvalidParameter(f"LH must be positive, got {LH}")
    _check_params(eps, cap)
    oracle = linsys_oracle(sys)
    lip = oracle.grad_lipschitz
    K = _budget(math.sqrt(8.0 * lip) * LH)

    def phase(x, fx, rec, idx):
        if lip <= 0.0:
            raise InvalidParameter("system matrix is zero; the objective is constant")
        return _accelerated_steps(oracle, lip, x, K, eps, rec, idx)

    return _restart(oracle, x0, eps, cap, phase)
