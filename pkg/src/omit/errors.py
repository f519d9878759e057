"""Exception hierarchy shared by the model, sweep and CLI layers."""


class OmitError(Exception):
    """Base class for every error raised by this package."""


class NonPositiveParameter(OmitError, ValueError):
    """A physical constant that must be strictly positive was not."""

    def __init__(self, name, value):
        self.name = name
        self.value = value
        super().__init__(f"{name} must be > 0, got {value!r}")


class ModelError(OmitError):
    """Numerical failure inside the model.

    ``index`` is filled in by the sweep layer with the failing grid index.
    """

    index = None

    def with_index(self, index):
        self.index = index
        self.args = (f"grid index {index}: {self.args[0] if self.args else ''}",)
        return self


class SolverFailure(ModelError):
    pass


class DegenerateDenominator(ModelError):
    pass


class ZeroField(ModelError):
    pass


class NotConverged(ModelError):
    pass


class UnstableIntegration(ModelError):
    pass
