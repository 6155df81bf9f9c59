"""Exception hierarchy.

Every error carries a stable ``code`` (its class name) so that the CLI and
the certificate can report *which* check failed, not just that something
went wrong.  Indexed errors (``ItineraryBreak(j)`` and friends) keep the
index on ``.index``.
"""


class WanderingError(Exception):
    """Base class of all library errors."""

    @property
    def code(self):
        return type(self).__name__


class _Indexed(WanderingError):
    def __init__(self, index, message=""):
        self.index = index
        super().__init__(f"{type(self).__name__}({index})" + (f": {message}" if message else ""))


class ZeroToNegativePower(WanderingError):
    pass


class DivisionByZero(WanderingError):
    pass


class ExtensionRequired(WanderingError):
    def __init__(self, k, message=""):
        self.k = k
        super().__init__(
            f"ExtensionRequired({k}): residue equation has no root in F_(p^{k})"
            + (f"; {message}" if message else "")
            + "; retry with a larger --k"
        )


class InvertZero(WanderingError):
    pass


class PrecisionExhausted(WanderingError):
    pass


class TermCapExceeded(PrecisionExhausted):
    pass


class NewtonStalled(WanderingError):
    pass


class TargetOutsideImage(WanderingError):
    pass


class BadParameter(WanderingError):
    pass


class PreconditionViolated(WanderingError):
    pass


class ConstraintInfeasible(WanderingError):
    pass


class CertificateFormatError(WanderingError):
    pass


class ItineraryBreak(_Indexed):
    pass


class RadiusBoundViolated(_Indexed):
    pass


class DenominatorMismatch(_Indexed):
    pass


class OracleMismatch(_Indexed):
    pass
