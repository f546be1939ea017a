"""Batch front end: parse and serialize problem files, run a solver, emit
key=value results and optional per-iteration trace CSVs.

File formats (UTF-8, whitespace separated, blank lines ignored):

.lmi        lmi <n> <m>
            B
            <n lines of n reals>
            A 1
            <n lines of n reals>
            ...
            A m
            <n lines of n reals>
            slater <sigma>          (optional)
            <m reals>               (certificate point d)

.lis        lis <p> <q>
            <le|eq> a_1 ... a_q b   (one line per row)

Numbers are written as the shortest decimal that round-trips binary64, so
serialize/parse is bit-exact. Exit codes: 0 solved, 1 error, 2 iteration
cap reached.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from .errors import InvalidParameter, LmiSolveError, ParseError
from .model import LinIneqSystem, LmiProblem, SlaterCertificate, mu_of, validate_certificate
from .objectives import nonsmooth_oracle, smooth_oracle
from .solvers import (
    DEFAULT_CAP,
    HARMONIC,
    RECURSIVE,
    SolveStatus,
    solve_bundle,
    solve_linsys,
    solve_nonsmooth,
    solve_smooth,
)
from .testbench import gen_lmi

__all__ = [
    "RunConfig",
    "parse_problem",
    "serialize_lmi",
    "serialize_linsys",
    "run",
    "main",
    "entry",
]

_METHODS = ("nonsmooth", "smooth", "bundle-nonsmooth", "bundle-smooth", "linsys")
_SYMMETRY_TOL = 1e-12


def _fmt(v: float) -> str:
    return repr(float(v))


# ---------------------------------------------------------------------------
# parsing


class _Lines:
    """Non-blank lines with their 1-based numbers."""

    def __init__(self, text):
        self.items = [
            (no, line.split())
            for no, line in enumerate(text.splitlines(), 1)
            if line.strip()
        ]
        self.pos = 0
        self.last = self.items[-1][0] if self.items else 0

    def take(self, what):
        if self.pos >= len(self.items):
            raise ParseError(f"line {self.last + 1}: expected {what}, found end of input")
        item = self.items[self.pos]
        self.pos += 1
        return item

    def done(self):
        return self.pos >= len(self.items)


def _reals(tokens, count, lineno, what):
    if len(tokens) != count:
        raise ParseError(f"line {lineno}: {what}: expected {count} values, got {len(tokens)}")
    out = []
    for tok in tokens:
        try:
            out.append(float(tok))
        except ValueError:
            raise ParseError(f"line {lineno}: {what}: not a number: {tok!r}") from None
    return out


def _positive_int(tok, lineno, what):
    try:
        value = int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: {what} must be an integer, got {tok!r}") from None
    if value < 1:
        raise ParseError(f"line {lineno}: {what} must be >= 1, got {value}")
    return value


def _matrix(lines, n, what):
    rows = []
    first = None
    for i in range(n):
        lineno, tokens = lines.take(f"row {i + 1} of {what}")
        if first is None:
            first = lineno
        rows.append(_reals(tokens, n, lineno, what))
    for j in range(n):
        for k in range(j + 1, n):
            if abs(rows[j][k] - rows[k][j]) > _SYMMETRY_TOL:
                raise ParseError(
                    f"line {first}: {what} is not symmetric at entry ({j + 1},{k + 1})"
                )
    return rows


def parse_problem(text: str):
    """Parse .lmi or .lis text into (problem, certificate or None)."""
    lines = _Lines(text)
    lineno, tokens = lines.take("a 'lmi' or 'lis' header")
    if tokens[0] == "lmi":
        if len(tokens) != 3:
            raise ParseError(f"line {lineno}: header must be 'lmi <n> <m>'")
        n = _positive_int(tokens[1], lineno, "n")
        m = _positive_int(tokens[2], lineno, "m")
        lineno, tokens = lines.take("the 'B' block")
        if tokens != ["B"]:
            raise ParseError(f"line {lineno}: expected 'B', got {' '.join(tokens)!r}")
        rhs = _matrix(lines, n, "matrix B")
        coeffs = []
        for i in range(1, m + 1):
            lineno, tokens = lines.take(f"the 'A {i}' block")
            if tokens != ["A", str(i)]:
                raise ParseError(f"line {lineno}: expected 'A {i}', got {' '.join(tokens)!r}")
            coeffs.append(_matrix(lines, n, f"matrix A {i}"))
        cert = None
        if not lines.done():
            lineno, tokens = lines.take("the 'slater' block")
            if tokens[0] != "slater" or len(tokens) != 2:
                raise ParseError(f"line {lineno}: expected 'slater <sigma>', got {' '.join(tokens)!r}")
            sigma = _reals(tokens[1:], 1, lineno, "sigma")[0]
            if not sigma > 0.0:
                raise ParseError(f"line {lineno}: sigma must be positive, got {sigma}")
            lineno, tokens = lines.take("the certificate point")
            point = _reals(tokens, m, lineno, "certificate point")
            cert = SlaterCertificate(point, sigma)
        if not lines.done():
            lineno, _ = lines.take("")
            raise ParseError(f"line {lineno}: unexpected content after the problem")
        return LmiProblem(coeffs, rhs), cert
    if tokens[0] == "lis":
        if len(tokens) != 3:
            raise ParseError(f"line {lineno}: header must be 'lis <p> <q>'")
        p = _positive_int(tokens[1], lineno, "p")
        q = _positive_int(tokens[2], lineno, "q")
        rows = []
        rhs = []
        kinds = []
        for i in range(p):
            lineno, tokens = lines.take(f"row {i + 1} of the system")
            if not tokens or tokens[0] not in ("le", "eq"):
                raise ParseError(f"line {lineno}: row must start with 'le' or 'eq'")
            kinds.append(tokens[0])
            values = _reals(tokens[1:], q + 1, lineno, f"row {i + 1}")
            rows.append(values[:q])
            rhs.append(values[q])
        if not lines.done():
            lineno, _ = lines.take("")
            raise ParseError(f"line {lineno}: unexpected content after the system")
        return LinIneqSystem(rows, rhs, kinds), None
    raise ParseError(f"line {lineno}: unknown header {tokens[0]!r}; expected 'lmi' or 'lis'")


def serialize_lmi(problem: LmiProblem, certificate: SlaterCertificate | None = None) -> str:
    """Canonical .lmi text; parse_problem(serialize_lmi(p, c)) returns an
    equal problem and certificate."""
    out = [f"lmi {problem.dim} {problem.num_vars}", "B"]
    out.extend(" ".join(_fmt(v) for v in row) for row in problem.rhs.mat)
    for i, coeff in enumerate(problem.coeffs, 1):
        out.append(f"A {i}")
        out.extend(" ".join(_fmt(v) for v in row) for row in coeff.mat)
    if certificate is not None:
        out.append(f"slater {_fmt(certificate.margin)}")
        out.append(" ".join(_fmt(v) for v in certificate.point))
    return "\n".join(out) + "\n"


def serialize_linsys(sys_: LinIneqSystem) -> str:
    """Canonical .lis text."""
    out = [f"lis {sys_.num_rows} {sys_.num_vars}"]
    for kind, row, b in zip(sys_.kinds, sys_.rows, sys_.rhs):
        out.append(f"{kind} " + " ".join(_fmt(v) for v in row) + f" {_fmt(b)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# running


@dataclass
class RunConfig:
    method: str = "bundle-nonsmooth"
    eps: float = 1e-8
    mu: float | None = None
    lh: float | None = None
    policy: str = "harmonic"
    cap: int = DEFAULT_CAP
    seed: int | None = None
    trace: str | None = None


def _resolve_mu(config, certificate):
    if config.mu is not None:
        return config.mu
    if certificate is not None:
        return mu_of(certificate)
    raise InvalidParameter(
        f"method {config.method!r} needs an error-bound modulus: pass --mu or use a "
        "problem file with a slater certificate"
    )


def _dispatch(config, problem, certificate):
    if config.policy not in ("harmonic", "recursive"):
        raise InvalidParameter(f"unknown policy {config.policy!r}")
    policy = HARMONIC if config.policy == "harmonic" else RECURSIVE
    method = config.method
    if method not in _METHODS:
        raise InvalidParameter(f"unknown method {method!r}")
    if method == "linsys":
        if not isinstance(problem, LinIneqSystem):
            raise InvalidParameter("method 'linsys' needs a linear system (.lis) file")
        if config.lh is None:
            raise InvalidParameter("method 'linsys' needs --lh (a Hoffman constant)")
        return solve_linsys(problem, config.lh, config.eps, config.cap)
    if not isinstance(problem, LmiProblem):
        raise InvalidParameter(f"method {method!r} needs an LMI (.lmi) file")
    if method == "nonsmooth":
        return solve_nonsmooth(problem, _resolve_mu(config, certificate), config.eps, config.cap)
    if method == "smooth":
        return solve_smooth(problem, _resolve_mu(config, certificate), config.eps, config.cap)
    oracle = nonsmooth_oracle(problem) if method == "bundle-nonsmooth" else smooth_oracle(problem)
    return solve_bundle(oracle, None, config.eps, policy, config.cap)


def run(config: RunConfig, problem, certificate=None, out=None) -> int:
    """Solve and report. Prints status, final_value, iterations and phases
    as key=value lines, writes the trace CSV when requested, and returns
    the exit code (0 solved, 1 error, 2 iteration cap reached)."""
    out = sys.stdout if out is None else out
    try:
        result = _dispatch(config, problem, certificate)
        if config.trace is not None:
            with open(config.trace, "w", encoding="utf-8") as fh:
                fh.write("phase,iter,total_iter,f_value,elapsed_ms\n")
                for r in result.trace.rows:
                    fh.write(
                        f"{r.phase},{r.iter},{r.total_iter},{_fmt(r.f_value)},{_fmt(r.elapsed_ms)}\n"
                    )
    except (LmiSolveError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"status={result.status.value}", file=out)
    print(f"final_value={_fmt(result.value)}", file=out)
    print(f"iterations={result.iterations}", file=out)
    print(f"phases={result.phases}", file=out)
    return 0 if result.status is SolveStatus.SOLVED else 2


# ---------------------------------------------------------------------------
# command line


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidParameter(message)


def _build_parser():
    parser = _Parser(prog="lmisolve", description="Restarted first-order LMI feasibility solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a .lmi or .lis problem file")
    solve.add_argument("file")
    solve.add_argument("--method", choices=_METHODS, default="bundle-nonsmooth")
    solve.add_argument("--eps", type=float, default=1e-8)
    solve.add_argument("--mu", type=float, default=None)
    solve.add_argument("--lh", type=float, default=None)
    solve.add_argument("--policy", choices=("harmonic", "recursive"), default="harmonic")
    solve.add_argument("--cap", type=int, default=DEFAULT_CAP)
    solve.add_argument("--trace", default=None)

    gen = sub.add_parser("gen", help="print a random certified .lmi instance")
    gen.add_argument("--n", type=int, default=5)
    gen.add_argument("--m", type=int, default=3)
    gen.add_argument("--sigma", type=float, default=1.0)
    gen.add_argument("--seed", type=int, default=0)

    check = sub.add_parser("check", help="validate a problem file and its certificate")
    check.add_argument("file")
    return parser


def main(argv=None) -> int:
    try:
        ns = _build_parser().parse_args(argv)
        if ns.command == "gen":
            inst = gen_lmi(ns.n, ns.m, ns.sigma, ns.seed)
            sys.stdout.write(serialize_lmi(inst.problem, inst.certificate))
            return 0
        with open(ns.file, "r", encoding="utf-8") as fh:
            text = fh.read()
        problem, certificate = parse_problem(text)
        if ns.command == "solve":
            config = RunConfig(
                method=ns.method,
                eps=ns.eps,
                mu=ns.mu,
                lh=ns.lh,
                policy=ns.policy,
                cap=ns.cap,
                trace=ns.trace,
            )
            return run(config, problem, certificate)
        # check
        if isinstance(problem, LmiProblem):
            print("kind=lmi")
            print(f"n={problem.dim}")
            print(f"m={problem.num_vars}")
            if certificate is None:
                print("certificate=absent")
            elif validate_certificate(problem, certificate):
                print("certificate=valid")
                print(f"mu={_fmt(mu_of(certificate))}")
            else:
                print("certificate=invalid")
                print("error: certificate does not satisfy its margin", file=sys.stderr)
                return 1
        else:
            print("kind=lis")
            print(f"p={problem.num_rows}")
            print(f"q={problem.num_vars}")
        return 0
    except (LmiSolveError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    sys.exit(main())
