"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class CFLError(RuntimeError):
    """Requested time step exceeds the stability limit of the explicit scheme."""

    def __init__(self, requested: float, admissible: float):
        self.requested = requested
        self.admissible = admissible
        super().__init__(
            f"time step {requested:.6g} exceeds the admissible explicit step "
            f"{admissible:.6g}"
        )


class GenerationError(RuntimeError):
    """Initial-data generation exhausted its rejection budget."""


class SweepInconclusiveError(RuntimeError):
    """Every run in a sweep was censored; raise the horizon and rerun."""


class DegenerateSweepDesignError(ValueError):
    """The sweep design cannot support a least-squares fit."""
