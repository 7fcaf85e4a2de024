"""Command-line front end.

Every subcommand reads one Dyer-graph JSON document.  Output is collected
in memory and written only once the command has finished, so a failing run
never leaves half a file behind.

Exit codes: 0 success, 1 validation or verification failure, 2 budget
exceeded, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import graph as graphmod
from .budget import ENV_VAR, Budget, default_budget, parse_budget
from .errors import BudgetExceeded, NotFinite, ParseError, UnknownGenerator, ValidationError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BUDGET = 2
EXIT_IO = 3


@dataclass(frozen=True)
class RunConfig:
    path: str
    command: str
    radius: int | None = None
    tolerance: float = graphmod.PD_PIVOT_THRESHOLD
    budget: Budget = Budget()
    output_format: str = "text"

    def __post_init__(self):
        if self.radius is not None and self.radius < 0:
            raise ValueError("radius must be nonnegative")
        if not 0 < self.tolerance < 1e-3:
            raise ValueError("tolerance must lie in (0, 1e-3)")


class _Failure(Exception):
    """Verification failed; ``text`` is the report to print."""

    def __init__(self, text: str):
        super().__init__(text)
        self.text = text


def _radius(text: str) -> int:
    r = int(text)
    if r < 0:
        raise argparse.ArgumentTypeError("radius must be nonnegative")
    return r


def _tolerance(text: str) -> float:
    t = float(text)
    if not 0 < t < 1e-3:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1e-3)")
    return t


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dyercat", description="Computations with Dyer groups and their complexes.")
    p.add_argument("--tol", type=_tolerance, default=graphmod.PD_PIVOT_THRESHOLD,
                   help="Cholesky pivot threshold for positive definiteness")
    p.add_argument("--budget", default=None,
                   help=f"search budgets, e.g. length=24,closure=1000000,order=10000 (overrides ${ENV_VAR})")
    p.add_argument("-o", "--output", default=None, help="write the result to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, help_text):
        c = sub.add_parser(name, help=help_text)
        c.add_argument("graph", help="Dyer graph JSON document")
        return c

    cmd("validate", "check a graph document and list every violation")
    cmd("present", "print the standard presentation")
    c = cmd("embed", "graph introduced by the embedding: Lambda, or Omega with --variant omega")
    c.add_argument("--variant", choices=("lambda", "omega"), default="lambda")
    c.add_argument("--verify", action="store_true", help="verify the embedding and print PASS/FAIL")
    c.add_argument("-v", "--verbose", action="store_true", help="with --verify, print every check")
    c = cmd("reduce", "canonical form of a word")
    c.add_argument("word", help='space-separated syllables, e.g. "a d^2 b^-1"')
    cmd("spherical", "list the spherical subsets")
    c = cmd("scwol", "the scwol of spherical subsets")
    c.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    c = cmd("develop", "ball of the development")
    c.add_argument("--radius", type=_radius, required=True)
    c = cmd("sigma", "ball of the complex Sigma")
    c.add_argument("--radius", type=_radius, required=True)
    g = c.add_mutually_exclusive_group()
    g.add_argument("--certify", action="store_true", help="check every interior vertex link")
    g.add_argument("--obj", action="store_true", help="emit Wavefront OBJ")
    g.add_argument("--dot", action="store_true", help="emit Graphviz DOT of the 1-skeleton")
    c = cmd("polytope", "face poset of the Coxeter polytope (all f=2, finite group)")
    c.add_argument("--obj", action="store_true", help="emit Wavefront OBJ (rank at most 3)")
    cmd("dim", "dimensions of Sigma and Sigma(W)")
    return p


# -- subcommands ----------------------------------------------------------------

def _validate(g, args, budget) -> str:
    return f"ok: {len(g.vertices)} vertices, {len(g.edges)} edges\n"


def _present(g, args, budget) -> str:
    from .presentations import dyer_presentation
    return dyer_presentation(g).to_text()


def _embed(g, args, budget) -> str:
    from .presentations import LAMBDA, lambda_graph, omega_graph, verify_embedding_theorem
    if not args.verify:
        return graphmod.dumps(lambda_graph(g) if args.variant == LAMBDA else omega_graph(g))
    report = verify_embedding_theorem(g, args.variant, budget)
    text = report.to_text() if args.verbose else report.summary() + "\n"
    if not report.passed:
        raise _Failure(report.to_text())
    return text


def _reduce(g, args, budget) -> str:
    from .words import Word, dyer_reduce
    w = Word.parse(args.word)
    unknown = w.generators - set(g.vertices)
    if unknown:
        raise UnknownGenerator(", ".join(sorted(unknown)))
    return f"{dyer_reduce(w, g, budget)}\n"


def _spherical(g, args, budget) -> str:
    return "".join(graphmod.subset_label(Y) + "\n" for Y in graphmod.spherical_subsets(g))


def _scwol(g, args, budget) -> str:
    from .scwol import dyer_scwol, dyer_scwol_dot, edge_text
    if args.dot:
        return dyer_scwol_dot(g)
    s = dyer_scwol(g)
    lines = [f"vertices: {len(s.vertices)}", f"edges: {len(s.edges)}"]
    lines += [f"vertex {graphmod.subset_label(v)}" for v in s.vertices]
    lines += [f"edge {edge_text(e)}" for e in s.edges]
    problems = s.check_axioms()
    if problems:
        raise _Failure("\n".join(lines + problems) + "\n")
    return "\n".join(lines) + "\n"


def _develop(g, args, budget) -> str:
    from .development import development_ball
    return development_ball(g, args.radius, budget).to_text()


def _sigma(g, args, budget) -> str:
    from . import sigma
    from .cat0 import certify_cat0
    if args.certify:
        cert = certify_cat0(g, args.radius, budget)
        if not cert.passed:
            raise _Failure(cert.to_text())
        return cert.to_text()
    ball = sigma.sigma_ball(g, args.radius, budget)
    if args.obj:
        return sigma.to_obj(ball)
    if args.dot:
        return ball.to_dot()
    problems = sigma.gluing_problems(ball) + sigma.label_problems(ball, budget)
    interior = sum(1 for v in ball.vertices if ball.is_interior(v))
    lines = [f"radius: {args.radius}", f"blocks: {len(ball.blocks)}",
             f"vertices: {len(ball.vertices)} ({interior} interior)", f"edges: {len(ball.edges)}"]
    if problems:
        raise _Failure("\n".join(lines + problems) + "\n")
    return "\n".join(lines) + "\n"


def _polytope(g, args, budget) -> str:
    from .polytope import face_poset_check, face_poset_text, polytope, to_obj
    if any(g.f[v] != 2 for v in g.vertices):
        raise _Failure("polytope needs a Coxeter graph (every f = 2)\n")
    try:
        p = polytope(g, budget=budget)
    except NotFinite as exc:
        raise _Failure(f"Coxeter group is infinite: {exc}\n") from None
    check = face_poset_check(p)
    if not check.ok:
        raise _Failure(face_poset_text(p) + f"face check failed: {check.witness}\n")
    return to_obj(p) if args.obj else face_poset_text(p)


def _dim(g, args, budget) -> str:
    from .cat0 import dimension_stats
    a, b = dimension_stats(g)
    return f"dim_sigma={a} dim_sigma_W={b}\n"


COMMANDS = {
    "validate": _validate, "present": _present, "embed": _embed, "reduce": _reduce,
    "spherical": _spherical, "scwol": _scwol, "develop": _develop, "sigma": _sigma,
    "polytope": _polytope, "dim": _dim,
}


def _emit(text: str, path: str | None, stream) -> None:
    if path is None:
        stream.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_IO
    try:
        budget = parse_budget(args.budget, default_budget()) if args.budget else default_budget()
        config = RunConfig(args.graph, args.command, getattr(args, "radius", None), args.tol, budget)
    except ValueError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_IO
    try:
        with graphmod.tolerance(config.tolerance):
            g = graphmod.load(config.path)
            text = COMMANDS[config.command](g, args, config.budget)
    except ValidationError as exc:
        stdout.write("".join(f"{v}\n" for v in exc.violations))
        return EXIT_FAILED
    except _Failure as exc:
        stdout.write(exc.text)
        return EXIT_FAILED
    except BudgetExceeded as exc:
        stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (OSError, json.JSONDecodeError, ParseError, UnknownGenerator, UnicodeDecodeError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_IO
    try:
        _emit(text, args.output, stdout)
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_IO
    return EXIT_OK


def main() -> None:
    sys.exit(run())
