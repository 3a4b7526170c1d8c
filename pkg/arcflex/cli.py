from . import __version__
from .cusp import (
    horizontal_bar_motion,
    make_double_watt,
    solve_cusp_flexes,
    trace_cusp_branches,
    verify_watt_relations)
from .errors import (
    ArcflexError,
    ComputationError,
    NoFlexDirectionError,
    StageError,
    ValidationError)
from .estimate import (
    ElongationProfile,
    classify,
    elongation_profile,
    fit_order)
from .flex import first_order_flex_basis, stress_basis
from .framework import rigidity_matrix
from .io import read_framework, write_path
from .linalg import rank
from .order_test import classic_order_test
from .parameters import FitParameters, Tolerances, TraceParameters
from .path import sample_polynomial_path, trace_mechanism
from .report import (
    AnalysisReport,
    digest,
    summarize_framework,
    summarize_path)
from contextlib import contextmanager
import argparse
import logging
import numpy as np
import os
import sys

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

# parameters of polynomial paths handed to the order estimator
POLYNOMIAL_TS = np.geomspace(1e-3, 1e-1, 41)
SYNTHETIC_LENGTHS = np.geomspace(1e-3, 1e-1, 41)


def cmd_validate(args):

    framework, _ = _load(args.framework)
    print(
        f"{args.framework}: valid, {framework.num_vertices} vertices, "
        f"{framework.num_edges} edges, {framework.num_pinned} pinned")
    return EXIT_OK


def cmd_analyze(args):

    framework, data = _load(args.framework)
    tolerances = Tolerances()
    X0 = framework.rest_configuration()

    report = AnalysisReport(__version__, digest(data))
    report.add("framework", summarize_framework(framework))
    report.add("rigidity", _rigidity_summary(framework, X0, tolerances))

    verdicts, witness_paths = _classic_verdicts(
        framework, X0, args.max_order, tolerances, args.seed)
    report.add("verdicts", verdicts)
    report.add("witness_paths", witness_paths)
    report.add("traced_paths", _traced_paths(
        framework, X0,
        TraceParameters(step_size=args.step, num_steps=args.steps),
        tolerances, args.max_order))

    sys.stdout.write(report.dumps())
    return EXIT_OK


def cmd_trace(args):

    framework, data = _load(args.framework)
    tolerances = Tolerances()
    parameters = TraceParameters(step_size=args.step, num_steps=args.steps)
    X0 = framework.rest_configuration()

    basis = first_order_flex_basis(framework, X0, tolerances)
    if not basis:
        raise NoFlexDirectionError(
            "no flex direction: the framework is first-order rigid")

    if args.direction == "auto":
        directions = [("plus", basis[0]), ("minus", -basis[0])]
    else:
        index = int(args.direction)
        if not 0 <= index < len(basis):
            raise NoFlexDirectionError(
                f"no flex direction {index}: the flex space has dimension "
                f"{len(basis)}")
        directions = [("plus", basis[index])]

    branches = {}
    for name, direction in directions:
        samples = trace_mechanism(
            framework, X0, direction, parameters, tolerances)
        csv_path = _branch_path(args.output, name, len(directions))
        write_path(samples, csv_path)
        branches[name] = {"csv": csv_path, **summarize_path(samples)}

    report = AnalysisReport(__version__, digest(data))
    report.add("framework", summarize_framework(framework))
    report.add("branch_count", len(branches))
    report.add("branches", branches)

    sys.stdout.write(report.dumps())
    return EXIT_OK


def cmd_order(args):

    fit_parameters = FitParameters(measure=args.measure)

    if args.synthetic_exponent is not None:
        report = AnalysisReport(__version__)
        lengths = SYNTHETIC_LENGTHS
        profile = ElongationProfile(
            lengths, (lengths**args.synthetic_exponent)[:, None])
        report.add("source", {
            "synthetic_exponent": args.synthetic_exponent})
    else:
        framework, data = _load(args.framework)
        report = AnalysisReport(__version__, digest(data))
        X0 = framework.rest_configuration()
        tolerances = Tolerances()

        if args.from_flex is not None:
            verdict = classic_order_test(
                framework, X0, args.from_flex, tolerances, args.seed)
            if not verdict.is_flexible:
                raise NoFlexDirectionError(
                    f"no flex direction: no {args.from_flex}-th order flex "
                    f"({verdict.kind})")
            samples = sample_polynomial_path(
                framework, X0, verdict.witness, POLYNOMIAL_TS)
            report.add("source", {"from_flex": args.from_flex})
        else:
            basis = first_order_flex_basis(framework, X0, tolerances)
            if not basis:
                raise NoFlexDirectionError(
                    "no flex direction: the framework is first-order rigid")
            samples = trace_mechanism(
                framework,
                X0,
                basis[0],
                TraceParameters(step_size=args.step, num_steps=args.steps),
                tolerances)
            report.add("source", {
                "from_trace": True,
                **summarize_path(samples)})

        profile = elongation_profile(samples, fit_parameters.measure)

    estimate = fit_order(profile, fit_parameters)
    report.add("estimate", estimate.describe())
    report.add("classification", _classifications(
        estimate, args.max_order, fit_parameters))

    sys.stdout.write(report.dumps())
    return EXIT_OK


def cmd_cusp_demo(args):

    a = abs(args.a) if args.a_positive else args.a
    tolerances = Tolerances()
    parameters = TraceParameters(step_size=args.step, num_steps=args.steps)
    fit_parameters = FitParameters()

    report = AnalysisReport(__version__)

    with _stage("build"):
        framework = make_double_watt(unit_bar=args.with_unit_bar)
        X0 = framework.rest_configuration()
        report.add("framework", summarize_framework(framework))
        report.add(
            "rigidity", _rigidity_summary(framework, X0, tolerances))

    with _stage("classic"):
        verdicts, _ = _classic_verdicts(
            framework, X0, 3, tolerances, args.seed, with_paths=False)
        report.add("verdicts", verdicts)

    with _stage("solve"):
        solutions = {
            branch: solve_cusp_flexes(framework, a, branch)
            for branch in (1, -1)
        }
        report.add("solutions", {
            _branch_name(branch): {
                "a": solution.a,
                "b": solution.b,
                "a_bar": solution.a_bar,
                "b_bar": solution.b_bar,
                "L": solution.length
            }
            for branch, solution in solutions.items()
        })

    with _stage("verify"):
        report.add("relations", {
            _branch_name(branch): verify_watt_relations(solution).describe()
            for branch, solution in solutions.items()
        })

    with _stage("trace"):
        traces = trace_cusp_branches(
            framework, a, parameters=parameters, tolerances=tolerances)

        branches = {}
        for branch, samples in traces.items():
            name = _branch_name(branch)
            csv_path = os.path.join(args.output_dir, f"cusp-{name}.csv")
            write_path(samples, csv_path)

            heights, tilts = horizontal_bar_motion(framework, samples)
            moved = len(samples) > 1
            estimate = fit_order(
                elongation_profile(samples), fit_parameters)
            branches[name] = {
                "csv": csv_path,
                **summarize_path(samples),
                "initial_height_change":
                    heights[1] - heights[0] if moved else None,
                "initial_tilt": tilts[1] if moved else None,
                "estimate": estimate.describe(),
                "classification": _classifications(
                    estimate, args.max_order, fit_parameters)
            }
        report.add("branches", branches)

    sys.stdout.write(report.dumps())
    return EXIT_OK


def create_parser():

    parser = argparse.ArgumentParser(
        prog="arcflex",
        description="Classic and arclength-based higher-order rigidity of "
                    "bar-and-joint frameworks.")
    parser.add_argument(
        "--verbose", "-v", action="store_true", help="Log debug output")
    parser.add_argument(
        "--seed", type=int, default=0,
        help="Seed of the heuristic order tests")

    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser(
        "validate", help="Validate a framework JSON file")
    validate.add_argument("framework", help="Framework JSON file")
    validate.set_defaults(func=cmd_validate)

    analyze = subparsers.add_parser(
        "analyze", help="Run the classic order tests")
    analyze.add_argument("framework", help="Framework JSON file")
    analyze.add_argument("--max-order", type=int, default=2)
    analyze.add_argument("--steps", type=int, default=50)
    analyze.add_argument("--step", type=float, default=1e-2)
    analyze.set_defaults(func=cmd_analyze)

    trace = subparsers.add_parser(
        "trace", help="Trace a finite motion and write it as CSV")
    trace.add_argument("framework", help="Framework JSON file")
    trace.add_argument(
        "--direction", default="auto",
        help="'auto' for both signs of the leading flex, or the index of a "
             "first-order flex basis vector")
    trace.add_argument("--steps", type=int, default=100)
    trace.add_argument("--step", type=float, default=1e-2)
    trace.add_argument(
        "--output", default="path.csv",
        help="CSV file; with two branches, '.plus'/'.minus' is inserted "
             "before the extension")
    trace.set_defaults(func=cmd_trace)

    order = subparsers.add_parser(
        "order", help="Estimate the elongation order along a path")
    order.add_argument("framework", nargs="?", help="Framework JSON file")
    source = order.add_mutually_exclusive_group(required=True)
    source.add_argument(
        "--from-flex", type=int, metavar="N",
        help="Use the polynomial path of an N-th order flex")
    source.add_argument(
        "--from-trace", action="store_true",
        help="Use a traced motion along the leading flex")
    source.add_argument(
        "--synthetic-exponent", type=float, help=argparse.SUPPRESS)
    order.add_argument("--max-order", type=int, default=6)
    order.add_argument(
        "--measure", choices=("squared", "linear"), default="squared")
    order.add_argument("--steps", type=int, default=100)
    order.add_argument("--step", type=float, default=1e-2)
    order.set_defaults(func=cmd_order)

    cusp = subparsers.add_parser(
        "cusp-demo", help="Reconstruct the double-Watt cusp mechanism")
    cusp.add_argument("--with-unit-bar", action="store_true")
    cusp.add_argument("--a", type=float, default=-1.0)
    cusp.add_argument("--a-positive", action="store_true",
                      help=argparse.SUPPRESS)
    cusp.add_argument("--max-order", type=int, default=6)
    cusp.add_argument("--steps", type=int, default=50)
    cusp.add_argument("--step", type=float, default=1e-2)
    cusp.add_argument("--output-dir", default=".")
    cusp.set_defaults(func=cmd_cusp_demo)

    return parser


def main(argv=None):

    parser = create_parser()
    args = parser.parse_args(argv)

    if args.command == "order" and args.synthetic_exponent is None and \
            args.framework is None:
        parser.error("order needs a framework file")

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.func(args)
    except ValidationError as e:
        for violation in e.violations:
            print(f"invalid: {violation.message}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except ArcflexError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_FAILURE


@contextmanager
def _stage(name):

    logger.info("stage %s", name)
    try:
        yield
    except StageError:
        raise
    except ArcflexError as e:
        raise StageError(name, e.message) from e


def _load(framework_path):

    with open(framework_path, 'rb') as f:
        data = f.read()
    return read_framework(framework_path), data


def _rigidity_summary(framework, X0, tolerances):

    R = rigidity_matrix(framework, X0)
    return {
        "rank": rank(R, tolerances.rank_rtol),
        "flex_dimension": len(first_order_flex_basis(
            framework, X0, tolerances)),
        "stress_dimension": len(stress_basis(framework, X0, tolerances))
    }


def _classic_verdicts(
        framework,
        X0,
        max_order,
        tolerances,
        seed,
        with_paths=True):

    fit_parameters = FitParameters()
    verdicts = {}
    witness_paths = {}

    for n in range(1, max_order + 1):
        verdict = classic_order_test(framework, X0, n, tolerances, seed)
        verdicts[str(n)] = verdict.describe()

        if with_paths and verdict.is_flexible:
            samples = sample_polynomial_path(
                framework, X0, verdict.witness, POLYNOMIAL_TS)
            estimate = fit_order(
                elongation_profile(samples), fit_parameters)
            witness_paths[str(n)] = estimate.describe()

    return verdicts, witness_paths


def _traced_paths(framework, X0, parameters, tolerances, max_order):
    """Order estimates along both signs of the leading flex; empty for
    first-order rigid frameworks."""

    basis = first_order_flex_basis(framework, X0, tolerances)
    if not basis:
        return {}

    fit_parameters = FitParameters()
    paths = {}
    for branch in (1, -1):
        samples = trace_mechanism(
            framework, X0, branch * basis[0], parameters, tolerances)
        path = summarize_path(samples)
        try:
            estimate = fit_order(elongation_profile(samples), fit_parameters)
        except ComputationError as e:
            logger.info("no order estimate on traced path: %s", e.message)
            path["estimate"] = None
            path["estimate_error"] = e.message
        else:
            path["estimate"] = estimate.describe()
            path["classification"] = _classifications(
                estimate, max_order, fit_parameters)
        paths[_branch_name(branch)] = path

    return paths


def _classifications(estimate, max_order, parameters):

    return {
        str(n): classify(estimate, n, parameters)
        for n in range(1, max_order + 1)
    }


def _branch_name(branch):
    return "plus" if branch > 0 else "minus"


def _branch_path(output, name, count):

    if count == 1:
        return output
    root, extension = os.path.splitext(output)
    return f"{root}.{name}{extension}"


if __name__ == "__main__":
    sys.exit(main())
