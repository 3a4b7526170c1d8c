from .errors import (
    ConvergenceError,
    NoFlexDirectionError,
    PreconditionError)
from .flex import scale_of
from .framework import (
    Configuration,
    constraint_function,
    rigidity_matrix,
    squared_elongation)
from .linalg import min_norm_solve, nullspace
from .log import ProjectionLog, TraceLog
from .parameters import Tolerances, TraceParameters
from math import factorial
from tqdm import tqdm
import jax
import jax.numpy as jnp
import logging
import numpy as np

logger = logging.getLogger(__name__)


class PathSamples():
    """Samples ``(t, X, s, elongations)`` along a motion of a framework.

    Args:

        framework (:class:`Framework`):
            The framework the samples belong to.

        ts (array-like, shape `(n,)`):
            Path parameters.

        configurations (array-like, shape `(n, c)`):
            Stacked free coordinates of every sample.

        truncated (bool):
            Whether the motion stopped before the requested length.

        log (:class:`TraceLog`, optional):
            Step statistics, for traced paths.
    """

    def __init__(
            self,
            framework,
            ts,
            configurations,
            truncated=False,
            log=None):

        self.framework = framework
        self.ts = np.asarray(ts, dtype=np.float64)
        self.configurations = np.asarray(configurations, dtype=np.float64)
        self.truncated = truncated
        self.log = log

        assert len(self.ts) == len(self.configurations), \
            "Parameters and configurations disagree"

        if len(self.configurations) > 1:
            self.arclengths = arclength(self.configurations)
        else:
            self.arclengths = np.zeros(len(self.configurations))

        self.elongations = [
            squared_elongation(framework, X) for X in self.configurations
        ]

    def __len__(self):
        return len(self.ts)

    @property
    def base(self):
        return Configuration(self.configurations[0])

    @property
    def scale(self):
        return scale_of(self.configurations[0])

    def elongation_matrix(self, measure="squared"):
        """Per-sample, per-edge elongations, shape `(n, E)`."""

        return np.array([
            e.squared if measure == "squared" else e.linear
            for e in self.elongations
        ]).reshape(len(self), self.framework.num_edges)

    def max_abs_elongation(self, measure="squared"):
        """``max_e |D_e|`` of every sample."""

        return np.array([e.max_abs(measure) for e in self.elongations])

    def displacements(self):
        """``|X(t) - X0|`` of every sample."""

        return np.linalg.norm(
            self.configurations - self.configurations[0], axis=1)


def polynomial_path(X0, flex):
    """The polynomial motion ``X0 + sum_k X^(k) t^k / k!`` of a flex.

    Returns:

        A function mapping `t` to a :class:`Configuration`.
    """

    if isinstance(X0, Configuration):
        X0 = X0.values
    X0 = np.asarray(X0, dtype=np.float64)
    terms = [
        (k, x / factorial(k))
        for k, x in enumerate(flex.derivatives, start=1)
    ]

    def path(t):
        if t == 0:
            return Configuration(X0)
        return Configuration(
            X0 + sum(c * t**k for k, c in terms))

    return path


def sample_polynomial_path(framework, X0, flex, ts):
    """Sample the polynomial path of `flex` at the parameters `ts`.

    ``t = 0`` is prepended if missing, so that arclengths start at `X0`.

    Returns:

        :class:`PathSamples`.
    """

    ts = np.unique(np.concatenate([[0.0], np.asarray(ts, dtype=np.float64)]))
    ts = ts[ts >= 0]
    path = polynomial_path(X0, flex)

    return PathSamples(
        framework,
        ts,
        np.stack([path(t).values for t in ts]))


def arclength(configurations):
    """Cumulative chordal length of a sequence of configurations.

    Args:

        configurations (list of :class:`Configuration` or array-like):
            At least two samples.

    Returns:

        Array of arclengths, starting at 0.
    """

    if len(configurations) < 2:
        raise PreconditionError("arclength needs at least 2 samples")

    X = np.stack([
        c.values if isinstance(c, Configuration) else np.asarray(c)
        for c in configurations
    ]).astype(np.float64)
    chords = np.linalg.norm(np.diff(X, axis=0), axis=1)

    return np.concatenate([[0.0], np.cumsum(chords)])


def project_to_manifold(
        framework,
        X_guess,
        X0=None,
        parameters=None,
        tolerances=None):
    """Gauss-Newton projection of `X_guess` onto ``D(X) = 0``.

    Each iteration takes the minimum-norm step ``-R^+ D(X)``.

    Args:

        framework (:class:`Framework`):
            The framework.

        X_guess (:class:`Configuration` or array-like):
            A configuration near the constraint manifold.

        X0 (:class:`Configuration`, optional):
            Reference configuration of the tolerance scale; defaults to
            `X_guess`.

        parameters (:class:`TraceParameters`, optional):
            Iteration limit, tolerance and basin bound.

        tolerances (:class:`Tolerances`, optional):
            Rank cutoff of the pseudoinverse.

    Returns:

        The projected :class:`Configuration` and a :class:`ProjectionLog`.
    """

    if parameters is None:
        parameters = TraceParameters()
    if tolerances is None:
        tolerances = Tolerances()

    if isinstance(X_guess, Configuration):
        X_guess = X_guess.values
    X = np.array(X_guess, dtype=np.float64)
    scale = scale_of(X if X0 is None else X0)
    tolerance = parameters.corrector_tolerance * scale

    log = ProjectionLog()
    residual = squared_elongation(framework, X).max_abs()

    basin = parameters.basin_fraction * float(
        np.min(framework.lengths**2, initial=np.inf))
    if residual > basin:
        raise PreconditionError(
            f"guess is too far from the constraint manifold "
            f"(max |D_e| = {residual:.3e} > {basin:.3e})")

    log.log_iteration(residual)

    # accepted points sit at round-off level
    target = 1e-3 * tolerance

    for _ in range(parameters.max_corrector_iterations):

        if residual <= target:
            break

        D = squared_elongation(framework, X).squared
        R = rigidity_matrix(framework, X)
        step, _ = min_norm_solve(R, -D, tolerances.rank_rtol)
        X_new = X + step
        new_residual = squared_elongation(framework, X_new).max_abs()

        if residual <= tolerance and not new_residual < 0.5 * residual:
            if new_residual < residual:
                X, residual = X_new, new_residual
                log.log_iteration(residual)
            break

        X, residual = X_new, new_residual
        log.log_iteration(residual)

    if residual <= tolerance:
        return Configuration(X), log

    raise ConvergenceError(
        f"projection did not converge in "
        f"{parameters.max_corrector_iterations} iterations "
        f"(max |D_e| = {residual:.3e})",
        log=log)


def trace_mechanism(
        framework,
        X0,
        direction=None,
        parameters=None,
        tolerances=None,
        seed_flex=None):
    """Trace a finite motion by predictor-corrector continuation.

    The predictor steps along the first-order flex closest to the previous
    direction of motion; the corrector is :func:`project_to_manifold`. A
    failed corrector halves the step (up to ``max_halvings`` times) before
    the trace is truncated.

    Args:

        framework (:class:`Framework`):
            The framework.

        X0 (:class:`Configuration`):
            Start of the motion.

        direction (array-like, optional):
            Initial direction, a first-order flex at `X0`.

        parameters (:class:`TraceParameters`, optional):
            Step size, number of steps and corrector settings.

        tolerances (:class:`Tolerances`, optional):
            Rank tolerances.

        seed_flex (:class:`FlexSequence`, optional):
            A degenerate flex whose polynomial path gives the first step.
            Needed to leave a cusp, where first-order flexes don't lead onto
            a branch.

    Returns:

        :class:`PathSamples` with the traced motion; `truncated` is set if a
        step could not be completed.
    """

    if parameters is None:
        parameters = TraceParameters()
    if tolerances is None:
        tolerances = Tolerances()

    X0 = X0 if isinstance(X0, Configuration) else Configuration(X0)
    h = parameters.step_size
    log = TraceLog()

    if seed_flex is None:
        direction = _check_direction(framework, X0, direction, tolerances)
        first = _first_step(framework, X0, direction, parameters, tolerances)
    else:
        first = _seeded_step(framework, X0, seed_flex, parameters, tolerances)

    ts = [0.0]
    configurations = [X0.values]
    s = 0.0

    if first is None:
        log.truncation_reason = "no first step in either orientation"
        logger.warning("trace truncated: %s", log.truncation_reason)
        return PathSamples(
            framework, ts, configurations, truncated=True, log=log)

    X, t, used, halvings, iterations, residual = first
    ts.append(t)
    configurations.append(X)
    s += np.linalg.norm(X - X0.values)
    log.log_step(0, used, halvings, iterations, residual, s)
    tangent = (X - X0.values) / np.linalg.norm(X - X0.values)

    truncated = False
    for step in tqdm(
            range(1, parameters.num_steps),
            disable=not parameters.show_progress):

        result = _step(
            framework, X0, X, tangent, h, parameters, tolerances)

        if result is None:
            truncated = True
            log.truncation_reason = \
                f"corrector failed at step {step} after " \
                f"{parameters.max_halvings} halvings"
            logger.warning("trace truncated: %s", log.truncation_reason)
            break

        X_new, used, halvings, iterations, residual = result
        chord = X_new - X
        s += np.linalg.norm(chord)
        t += used
        tangent = chord / np.linalg.norm(chord)
        X = X_new

        ts.append(t)
        configurations.append(X)
        log.log_step(step, used, halvings, iterations, residual, s)

        if step % parameters.log_every == 0:
            logger.debug(
                "step %d: s=%.6f, h=%.3e, residual=%.3e",
                step, s, used, residual)

    logger.debug(
        "traced %d steps, s=%.6f, %d halvings",
        len(log.step_logs), s, log.total_halvings)

    return PathSamples(
        framework, ts, configurations, truncated=truncated, log=log)


def differentiate_along_path(framework, X0, flex, k):
    """The `k`-th derivative at ``t = 0`` of ``D_e(t)`` along the polynomial
    path of `flex`, by automatic differentiation.

    Returns:

        Array of shape `(E,)`.
    """

    if isinstance(X0, Configuration):
        X0 = X0.values
    X0 = jnp.asarray(X0)
    terms = [
        (a, jnp.asarray(x) / factorial(a))
        for a, x in enumerate(flex.derivatives, start=1)
    ]
    D = constraint_function(framework)

    def along_path(t):
        X = X0
        for a, c in terms:
            X = X + c * t**a
        return D(X)

    derivative = along_path
    for _ in range(k):
        derivative = jax.jacfwd(derivative)

    return np.asarray(derivative(jnp.asarray(0.0)))


def _check_direction(framework, X0, direction, tolerances):

    R = rigidity_matrix(framework, X0)

    if nullspace(R, tolerances.rank_rtol).shape[1] == 0:
        raise NoFlexDirectionError(
            "no flex direction: the framework is first-order rigid")

    if direction is None:
        raise PreconditionError("a direction is required without a seed")

    direction = np.asarray(direction, dtype=np.float64)
    norm = np.linalg.norm(direction)
    if norm == 0 or np.linalg.norm(R @ direction) > 1e-8 * norm:
        raise PreconditionError(
            "direction is not a first-order flex "
            f"(residual {np.linalg.norm(R @ direction):.3e})")

    return direction / norm


def _first_step(framework, X0, direction, parameters, tolerances):
    """First step along `direction`, or against it if that fails: the full
    step in both orientations, then a step shortened by ``seed_divisor``."""

    for h in (
            parameters.step_size,
            parameters.step_size / parameters.seed_divisor):
        for orientation in (1.0, -1.0):
            result = _step(
                framework, X0, X0.values, orientation * direction, h,
                parameters, tolerances)
            if result is None:
                continue
            if orientation < 0:
                logger.info("first step taken against the given direction")
            X, used, halvings, iterations, residual = result
            return X, used, used, halvings, iterations, residual

    return None


def _seeded_step(framework, X0, seed_flex, parameters, tolerances):
    """First step from the polynomial path of a degenerate flex, with the
    parameter chosen so that the leading term moves by about one step."""

    m = seed_flex.degeneracy
    assert m < seed_flex.order, "Seed flex is identically zero"
    leading = np.linalg.norm(seed_flex.derivative(m + 1))
    path = polynomial_path(X0, seed_flex)

    h = parameters.step_size
    for halvings in range(parameters.max_halvings + 1):
        t = (h * factorial(m + 1) / leading)**(1.0 / (m + 1))
        guess = path(t).values
        try:
            X, projection = project_to_manifold(
                framework, guess, X0, parameters, tolerances)
        except (ConvergenceError, PreconditionError):
            h /= 2
            continue
        return (X.values, t, h, halvings, projection.iterations,
                projection.residuals[-1])

    return None


def _step(framework, X0, X, tangent, h, parameters, tolerances):
    """One predictor-corrector step with step halving.

    Returns:

        ``(X_new, h_used, halvings, corrector_iterations, residual)`` or
        ``None`` if every halving failed.
    """

    R = rigidity_matrix(framework, X)
    N = nullspace(R, tolerances.rank_rtol)

    # the flex closest to the previous direction of motion
    predicted = N @ (N.T @ tangent)
    if np.linalg.norm(predicted) < 1e-12:
        predicted = tangent
    predicted = predicted / np.linalg.norm(predicted)

    for halvings in range(parameters.max_halvings + 1):
        guess = X + h * predicted
        try:
            X_new, projection = project_to_manifold(
                framework, guess, X0, parameters, tolerances)
        except (ConvergenceError, PreconditionError):
            h /= 2
            continue

        # a correction longer than the step jumped to another branch
        if np.linalg.norm(X_new.values - guess) > h:
            h /= 2
            continue

        # fell back onto the start of the step
        if np.linalg.norm(X_new.values - X) < 0.5 * h:
            h /= 2
            continue

        return (X_new.values, h, halvings, projection.iterations,
                projection.residuals[-1])

    return None
