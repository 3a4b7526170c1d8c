class Tolerances():
    """Numerical tolerances shared by the rigidity computations.

    Args:

        rank_rtol (float):
            Singular values below ``rank_rtol * sigma_max`` count as zero.

        pin_residual (float):
            Relative residual under which a pin-respecting rigid motion is
            considered a flex (the framework is then under-pinned).

        prestress_warn (float):
            Rest-state elongation above which explicitly given lengths are
            reported as prestressed.

        feasibility (float):
            Relative size of the stress projections below which a level of
            the flex equations counts as solvable.

        extension_residual (float):
            Residual a lower flex level may have before ``extend_flex``
            refuses it.

        verify (float):
            Relative bound on constraint coefficients used by ``verify_flex``.
    """

    def __init__(
            self,
            rank_rtol=1e-10,
            pin_residual=1e-9,
            prestress_warn=1e-9,
            feasibility=1e-9,
            extension_residual=1e-10,
            verify=1e-9):

        self.rank_rtol = rank_rtol
        self.pin_residual = pin_residual
        self.prestress_warn = prestress_warn
        self.feasibility = feasibility
        self.extension_residual = extension_residual
        self.verify = verify


class TraceParameters():
    """Parameters to control predictor-corrector tracing of a mechanism.

    Args:

        step_size (float):
            Arclength of a single predictor step.

        num_steps (int):
            Number of steps to take.

        max_halvings (int):
            How often the step size is halved after a failed corrector before
            the trace is truncated.

        seed_divisor (int):
            Divisor of the step size for the retry of a first step that fails
            in both orientations.

        max_corrector_iterations (int):
            Gauss-Newton iterations allowed per projection.

        corrector_tolerance (float):
            Projection succeeds once ``max |D_e| <= corrector_tolerance * (1 +
            |X0|^2)``.

        basin_fraction (float):
            Largest accepted initial elongation, relative to the smallest
            squared rest length.

        show_progress (bool):
            Whether to show a progress bar.

        log_every (int):
            How often to emit a debug log line while tracing.
    """

    def __init__(
            self,
            step_size=1e-2,
            num_steps=100,
            max_halvings=6,
            seed_divisor=16,
            max_corrector_iterations=50,
            corrector_tolerance=1e-12,
            basin_fraction=1e-2,
            show_progress=False,
            log_every=10):

        assert step_size > 0, "Step size has to be positive"

        self.step_size = step_size
        self.num_steps = num_steps
        self.max_halvings = max_halvings
        self.seed_divisor = seed_divisor
        self.max_corrector_iterations = max_corrector_iterations
        self.corrector_tolerance = corrector_tolerance
        self.basin_fraction = basin_fraction
        self.show_progress = show_progress
        self.log_every = log_every


class FitParameters():
    """Parameters of the elongation order fit.

    Args:

        min_points (int):
            Minimal number of samples in the fit window.

        noise_floor (float):
            Elongations below ``noise_floor * (1 + |X0|^2)`` are numerical
            zeros.

        margin (float):
            A slope has to exceed ``n + margin`` to witness n-th order
            flexibility.

        measure (string):
            ``"squared"`` to fit ``|D_e|``, ``"linear"`` to fit ``|d_e|``.
    """

    def __init__(
            self,
            min_points=8,
            noise_floor=1e-13,
            margin=0.1,
            measure="squared"):

        assert measure in ("squared", "linear"), \
            f"Unknown elongation measure {measure}"

        self.min_points = min_points
        self.noise_floor = noise_floor
        self.margin = margin
        self.measure = measure
