"""Exception types raised by the numerical and exact routines."""


class UnimodularError(Exception):
    """Base class for all errors raised by this package."""


class BadSpec(UnimodularError, ValueError):
    """A polynomial or family specification could not be understood."""


class DegenerateLeading(UnimodularError):
    """The leading y-coefficient vanishes (numerically) at the requested x.

    ``poly`` carries the trimmed specialization so callers that only want the
    value can still use it.
    """

    def __init__(self, x0, value, poly=None):
        super().__init__(f"|a_g({x0})| = {abs(value):.3e} below degeneracy floor")
        self.x0 = x0
        self.value = value
        self.poly = poly


class NotSquarefreeGenerically(UnimodularError):
    """disc_y vanishes identically: P has a repeated factor in y."""


class NoConvergence(UnimodularError):
    def __init__(self, count, roots=None):
        super().__init__(f"{count} root(s) failed to converge")
        self.count = count
        self.roots = roots


class GridTooCoarse(UnimodularError):
    """Doubling the jump scan grid changed the number of detected jumps."""


class PoleNearContour(UnimodularError):
    pass


class QuadratureNonconvergent(UnimodularError):
    pass


class NonReciprocal(UnimodularError, ValueError):
    pass


class SectorViolation(UnimodularError):
    def __init__(self, roots):
        super().__init__(f"{len(roots)} nonunimodular root(s) in the all-unimodular sector")
        self.roots = roots


class DiscTooCostly(UnimodularError):
    """The exact discriminant would exceed the configured cost budget."""
