"""Exception hierarchy shared across the package.

CLI exit codes: ValidationError family maps to exit 2, numerical failures
(PrecisionError, UnconvergedError) map to exit 3.
"""


class AfpropError(Exception):
    pass


class ValidationError(AfpropError, ValueError):
    """Malformed or inconsistent input data."""


class SelfAdjointnessError(ValidationError):
    """Element required to be self-adjoint is not, beyond tolerance."""


class PrecisionError(AfpropError, ArithmeticError):
    """A 64-bit computation cannot certify the requested quantity."""


class UndeterminedDistanceError(AfpropError):
    """Sequence prefixes agree over the compared span without witnessing equality.

    Carries the bound implied by the witnessed span.
    """

    def __init__(self, span: int):
        self.span = span
        self.witness_bound = 2.0 ** (-span)
        super().__init__(
            f"prefixes agree over {span} entries; distance undetermined, <= {self.witness_bound}"
        )


class GridBudgetError(AfpropError):
    """Sphere grid at the requested resolution exceeds the sample budget."""

    def __init__(self, dim: int, resolution: float, required: int, cap: int):
        self.dim = dim
        self.resolution = resolution
        self.required = required
        self.cap = cap
        super().__init__(
            f"covering a {dim}-dimensional sphere at resolution {resolution:g} "
            f"needs ~{required:.3g} samples, above the cap {cap:.3g}"
        )
