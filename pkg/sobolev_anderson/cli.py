# cli.py
import argparse
import logging
import sys

from pydantic import ValidationError

from sobolev_anderson.anderson.config import AA_DEFAULT_MAX_ITERS, AA_DEFAULT_TOL
from sobolev_anderson.errors import AccelerationError
from sobolev_anderson.experiments import RunSpec, SolverSpec, TheorySpec, run_experiment
from sobolev_anderson.experiments.config import AA_OUTPUT_DIR, AA_SEED, EXIT_ERROR, LOG_LEVEL
from sobolev_anderson.norms import NormKind


def memory(value: str) -> int | None:
    """Memory flag: a nonnegative integer, or inf for unbounded"""
    if value.lower() in ("inf", "none", "unbounded"):
        return None
    return int(value)


def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--solvers", default=None, help="comma list of picard, aa, gmres, one-step")
    parent.add_argument("--norm", default="l2", help="comma list of l2, hm1, hm2, hm<s>; one AA run per norm")
    parent.add_argument("--m", type=memory, default=10, help="Anderson memory / GMRES restart (inf = unbounded)")
    parent.add_argument("--beta", type=float, default=1.0, help="mixing parameter in (0, 1]")
    parent.add_argument("--tol", type=float, default=AA_DEFAULT_TOL, help="relative residual tolerance")
    parent.add_argument("--max-iters", type=int, default=AA_DEFAULT_MAX_ITERS)
    parent.add_argument("--seed", type=int, default=AA_SEED)
    parent.add_argument("--output", default=AA_OUTPUT_DIR, help="directory for CSV files")
    parent.add_argument("--log-level", default=LOG_LEVEL)
    return parent


def _waveholtz_flags(parser: argparse.ArgumentParser, dim: int) -> None:
    parser.add_argument("--n", type=int, default=None, help="interior points per direction")
    parser.add_argument("--omega", type=float, default=None)
    parser.add_argument("--cfl", type=float, default=None)
    if dim == 1:
        parser.add_argument("--speed", choices=["a", "b", "c"], default="a")
    parser.add_argument("--with-reference", action="store_true", help="compute a dense reference for error curves")


def build_parser() -> argparse.ArgumentParser:
    parent = _common_flags()
    parser = argparse.ArgumentParser(
        prog="sobolev_anderson",
        description="Anderson acceleration with Sobolev-weighted least squares: experiments and theory checks",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    poisson = sub.add_parser("poisson", parents=[parent], help="weighted Jacobi / Richardson for 1D Poisson")
    poisson.add_argument("--variant", choices=["jacobi", "richardson"], default="jacobi")
    poisson.add_argument("--n", type=int, default=None)
    poisson.add_argument("--one-step", type=int, default=None, metavar="K", help="add one-step AA curves up to k=K")

    nlh = sub.add_parser("nlh", parents=[parent], help="nonlinear Helmholtz with a Kerr medium")
    nlh.add_argument("--k0", type=float, default=None)

    _waveholtz_flags(sub.add_parser("waveholtz1d", parents=[parent], help="1D WaveHoltz iteration"), 1)
    _waveholtz_flags(sub.add_parser("waveholtz2d", parents=[parent], help="2D WaveHoltz iteration"), 2)

    theory = sub.add_parser("theory-bound", parents=[parent], help="verify the one-step Chebyshev bound")
    theory.add_argument("--a", type=float, default=0.3)
    theory.add_argument("--b", type=float, default=0.9)
    theory.add_argument("--k", type=int, default=None, help="Picard steps before the AA step (default m)")
    theory.add_argument("--n", type=int, default=None)
    theory.add_argument("--trials", type=int, default=None)
    theory.add_argument("--sigma", choices=["none", "inverse-square"], default="none")
    theory.add_argument("--placement", choices=["equispaced", "chebyshev", "random"], default="equispaced")

    compare = sub.add_parser("gmres-compare", parents=[parent], help="AA next to restarted GMRES")
    compare.add_argument("--problem", choices=["poisson", "waveholtz1d", "waveholtz2d"], default="waveholtz1d")
    compare.add_argument("--variant", choices=["jacobi", "richardson"], default=None)
    _waveholtz_flags(compare, 1)
    return parser


def _solvers(args: argparse.Namespace) -> list[SolverSpec]:
    default = "aa,gmres" if args.subcommand == "gmres-compare" else "picard,aa"
    kinds = [kind.strip() for kind in (args.solvers or default).split(",") if kind.strip()]
    norms = [NormKind.parse(label) for label in args.norm.split(",") if label.strip()]
    one_step = getattr(args, "one_step", None)
    if one_step is not None and "one-step" not in kinds:
        kinds.append("one-step")

    solvers = []
    for kind in kinds:
        if kind in ("aa", "one-step"):
            solvers += [SolverSpec(kind=kind, m=args.m, norm=norm, beta=args.beta) for norm in norms]
        else:
            solvers.append(SolverSpec(kind=kind, m=args.m, norm=norms[0]))
    return solvers


PROBLEM_FLAGS = {
    "poisson": ("variant", "n"),
    "nlh": ("k0",),
    "waveholtz1d": ("n", "omega", "speed", "cfl"),
    "waveholtz2d": ("n", "omega", "cfl"),
}


def _problem_params(args: argparse.Namespace) -> dict:
    keys = PROBLEM_FLAGS[getattr(args, "problem", None) or args.subcommand]
    return {key: getattr(args, key) for key in keys if getattr(args, key, None) is not None}


def spec_from_args(args: argparse.Namespace) -> RunSpec:
    """Translate parsed flags into a validated RunSpec"""
    common = dict(
        subcommand=args.subcommand,
        tol=args.tol,
        max_iters=args.max_iters,
        seed=args.seed,
        output=args.output,
    )
    if args.subcommand == "theory-bound":
        theory = TheorySpec(
            **{key: value for key, value in dict(
                n=args.n, a=args.a, b=args.b, k=args.k, m=args.m, trials=args.trials,
                sigma=args.sigma, placement=args.placement,
            ).items() if value is not None}
        )
        return RunSpec(theory=theory, **common)

    return RunSpec(
        problem=getattr(args, "problem", None),
        problem_params=_problem_params(args),
        solvers=_solvers(args),
        one_step=getattr(args, "one_step", None),
        with_reference=getattr(args, "with_reference", False),
        **common,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s %(levelname)s:%(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        spec = spec_from_args(args)
    except (ValidationError, AccelerationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    state = run_experiment(spec)
    for line in state.summary:
        print(line)
    if state.error_message:
        print(f"error: {state.error_message}", file=sys.stderr)
    return state.exit_code
