class StepLog():
    """Statistics of a single predictor-corrector step."""

    def __init__(self,
                 step,
                 step_size,
                 halvings,
                 corrector_iterations,
                 residual,
                 arclength):

        self.step = step
        self.step_size = step_size
        self.halvings = halvings
        self.corrector_iterations = corrector_iterations
        self.residual = residual
        self.arclength = arclength

        assert step is not None and residual is not None, \
            "Both step and residual have to be logged"


class TraceLog():
    """The log of a traced mechanism.

    Contains one instance of :class:`StepLog` per accepted step, plus the
    reason the trace stopped early (if it did).
    """

    def __init__(self):

        self.step_logs = []
        self.truncation_reason = None

    def log_step(self,
                 step,
                 step_size,
                 halvings,
                 corrector_iterations,
                 residual,
                 arclength):

        self.step_logs.append(
                StepLog(
                        step,
                        step_size,
                        halvings,
                        corrector_iterations,
                        residual,
                        arclength))

    @property
    def total_halvings(self):
        return sum(s.halvings for s in self.step_logs)


class ProjectionLog():
    """Residual history of one Gauss-Newton projection."""

    def __init__(self):

        self.residuals = []

    def log_iteration(self, residual):

        self.residuals.append(residual)

    @property
    def iterations(self):
        return max(len(self.residuals) - 1, 0)
