from .errors import DegenerateFitError, OrderOutOfRangeError, PreconditionError
from .parameters import FitParameters
import math
import numpy as np

WITNESSES_FLEXIBILITY = "witnesses_flexibility"
DOES_NOT_WITNESS = "does_not_witness"


class ElongationProfile():
    """Worst-edge elongation against a path length measure.

    Args:

        lengths (array-like, shape `(n,)`):
            Strictly increasing, positive path lengths (arclength or
            displacement).

        per_edge (array-like, shape `(n, E)`):
            Absolute elongation of every edge.

        scale (float):
            ``1 + |X0|^2`` of the path's start, for the noise floor.
    """

    def __init__(self, lengths, per_edge, scale=1.0):

        self.lengths = np.asarray(lengths, dtype=np.float64)
        self.per_edge = np.abs(np.asarray(per_edge, dtype=np.float64)).reshape(
            len(self.lengths), -1)
        self.scale = scale

    @property
    def worst(self):
        """``max_e |D_e|`` per sample."""

        if self.per_edge.shape[1] == 0:
            return np.zeros(len(self.lengths))
        return self.per_edge.max(axis=1)

    def pairs(self):
        return list(zip(self.lengths.tolist(), self.worst.tolist()))

    def __len__(self):
        return len(self.lengths)


class OrderEstimate():
    """Fitted growth order of the elongation in the path length.

    Args:

        slope (float):
            The log-log slope; NaN if the noise floor was hit.

        fit_window (tuple):
            ``(s_min, s_max)`` of the fitted samples.

        r_squared (float):
            Coefficient of determination of the fit.

        floor_hit (bool):
            Whether the elongations are indistinguishable from zero.

        per_edge (list of float):
            The slope of every edge (NaN where an edge stays at the floor).

        num_points (int):
            The number of fitted samples.
    """

    def __init__(
            self,
            slope,
            fit_window,
            r_squared,
            floor_hit,
            per_edge,
            num_points):

        self.slope = slope
        self.fit_window = fit_window
        self.r_squared = r_squared
        self.floor_hit = floor_hit
        self.per_edge = per_edge
        self.num_points = num_points

    def describe(self):

        return {
            "slope": _finite_or_none(self.slope),
            "window": [_finite_or_none(w) for w in self.fit_window],
            "r2": _finite_or_none(self.r_squared),
            "floor_hit": self.floor_hit,
            "per_edge": [_finite_or_none(s) for s in self.per_edge]
        }


def elongation_profile(samples, measure="squared"):
    """Pair the arclength of every sample with its elongations.

    Samples with repeated arclength are dropped, as is ``s = 0``.

    Args:

        samples (:class:`PathSamples`):
            The path.

        measure (string):
            ``"squared"`` for ``|D_e|``, ``"linear"`` for ``|d_e|``.

    Returns:

        An :class:`ElongationProfile`.
    """

    return _profile(
        samples.arclengths,
        samples.elongation_matrix(measure),
        samples.scale)


def displacement_profile(samples, measure="squared"):
    """Like :func:`elongation_profile`, against the displacement ``|X(t) -
    X0|`` instead of the arclength."""

    displacements = samples.displacements()
    order = np.argsort(displacements, kind='stable')

    return _profile(
        displacements[order],
        samples.elongation_matrix(measure)[order],
        samples.scale)


def fit_order(profile, parameters=None):
    """Fit the growth order of the elongation on the smallest decade of path
    lengths.

    The noise floor counts as hit if at least ``min_points`` samples sit on
    it and fewer than ``min_points`` rise above it. Profiles too short to
    decide either way raise :class:`PreconditionError`.

    Args:

        profile (:class:`ElongationProfile`):
            The elongation profile.

        parameters (:class:`FitParameters`, optional):
            Window size, noise floor.

    Returns:

        An :class:`OrderEstimate`.
    """

    if parameters is None:
        parameters = FitParameters()

    if len(profile) < parameters.min_points:
        raise PreconditionError(
            f"profile has {len(profile)} samples, at least "
            f"{parameters.min_points} are needed")

    floor = parameters.noise_floor * profile.scale
    worst = profile.worst
    usable = worst > floor

    if usable.sum() < parameters.min_points:
        if (~usable).sum() < parameters.min_points:
            raise PreconditionError(
                f"{int(usable.sum())} samples above and "
                f"{int((~usable).sum())} at the noise floor: too few to fit "
                f"an order or to call the path flat")
        return OrderEstimate(
            math.nan,
            (float(profile.lengths[0]), float(profile.lengths[-1])),
            math.nan,
            True,
            [math.nan] * profile.per_edge.shape[1],
            int(usable.sum()))

    lengths = profile.lengths[usable]
    values = worst[usable]
    window = _window(lengths, parameters.min_points)

    slope, r_squared = _loglog_fit(lengths[window], values[window])

    per_edge = []
    edges = profile.per_edge[usable][window]
    for edge_values in edges.T:
        above = edge_values > floor
        if above.sum() < 2 or np.ptp(np.log(lengths[window][above])) == 0:
            per_edge.append(math.nan)
        else:
            per_edge.append(_loglog_fit(
                lengths[window][above], edge_values[above])[0])

    return OrderEstimate(
        slope,
        (float(lengths[window][0]), float(lengths[window][-1])),
        r_squared,
        False,
        per_edge,
        int(window.sum()))


def classify(estimate, n, parameters=None):
    """Whether the fitted path witnesses n-th order flexibility, i.e. keeps
    the elongation in ``o(s^n)``.

    A path can only witness flexibility; rigidity needs all paths.
    """

    if n < 1:
        raise OrderOutOfRangeError(f"order has to be at least 1, got {n}")

    if parameters is None:
        parameters = FitParameters()

    if estimate.floor_hit or estimate.slope > n + parameters.margin:
        return WITNESSES_FLEXIBILITY
    return DOES_NOT_WITNESS


def _profile(lengths, per_edge, scale):

    lengths = np.asarray(lengths, dtype=np.float64)
    if len(lengths) == 0:
        raise PreconditionError("empty path")

    keep = lengths > 0
    # drop repeated lengths (e.g. steps that did not move)
    keep[1:] &= np.diff(lengths) > 0

    if keep.sum() < 2:
        raise PreconditionError(
            "path has fewer than 2 distinct positive lengths")

    return ElongationProfile(lengths[keep], per_edge[keep], scale)


def _window(lengths, min_points):
    """Mask of the smallest decade of `lengths`, widened to two decades and
    then to the `min_points` smallest samples if too few fall inside."""

    smallest = lengths.min()
    for decades in (1, 2):
        window = lengths <= smallest * 10**decades
        if window.sum() >= min_points:
            return window

    window = np.zeros(len(lengths), dtype=bool)
    window[np.argsort(lengths)[:min_points]] = True
    return window


def _loglog_fit(lengths, values):

    x = np.log(lengths)
    y = np.log(values)

    if np.ptp(x) == 0:
        raise DegenerateFitError()

    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    total = np.sum((y - y.mean())**2)
    r_squared = 1.0 if total == 0 else 1.0 - np.sum(residuals**2) / total

    return float(slope), float(r_squared)


def _finite_or_none(value):

    value = float(value)
    return value if math.isfinite(value) else None
