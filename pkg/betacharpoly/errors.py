"""
betacharpoly.errors
~~~~~~~~~~~~~~~~~~~

Exceptions raised by the library. Each one also derives from the closest
builtin exception, so callers may catch either.

The CLI turns any of these into a structured error record via
:meth:`BetaCharpolyError.record`.

"""
import logging

_LOGGER = logging.getLogger(__name__)


class BetaCharpolyError(Exception):
    """Base class for every error raised by :py:mod:`betacharpoly`.

    :type message: :py:class:`str`
    :param message: human readable description.

    :type module: :py:class:`str`
    :param module: (Optional) short name of the originating module,
        e.g. ``'hyper'``. Defaults to ``'betacharpoly'``.

    :type details: :py:class:`dict`
    :param details: (Optional) extra diagnostics, must be JSON serializable.
    """

    kind = "error"

    def __init__(self, message, module="betacharpoly", details=None):
        super().__init__(message)
        self.message = message
        self.module = module
        self.details = dict(details or {})

    def record(self):
        """Structured form used by the CLI.

        :rtype: :py:class:`dict`
        :returns: ``{kind, module, message, details}``.
        """
        return {
            "kind": self.kind,
            "module": self.module,
            "message": self.message,
            "details": self.details,
        }


class DomainError(BetaCharpolyError, ValueError):
    kind = "domain_error"


class IncomparableWeightsError(DomainError):
    kind = "incomparable_weights"


class CoefficientUndefinedError(DomainError):
    kind = "coefficient_undefined"


class VanishingPolynomialError(BetaCharpolyError, ValueError):
    """Raised when a Jack polynomial is requested in fewer variables than
    its length, where it vanishes identically."""

    kind = "vanishing_polynomial"


class DegenerateParameterError(BetaCharpolyError, ArithmeticError):
    kind = "degenerate_parameter"


class TruncationNotConvergedError(BetaCharpolyError, ArithmeticError):
    """A series did not meet its stopping rule within the allowed weight.

    :type last_shell: :py:class:`float`
    :param last_shell: magnitude of the final shell that was summed.

    :type weight_used: :py:class:`int`
    :param weight_used: the largest partition weight included.
    """

    kind = "truncation_not_converged"

    def __init__(self, message, last_shell, weight_used, module="hyper"):
        super().__init__(
            message,
            module=module,
            details={"last_shell": float(last_shell), "weight_used": int(weight_used)},
        )
        self.last_shell = float(last_shell)
        self.weight_used = int(weight_used)


class QuadratureError(BetaCharpolyError, RuntimeError):
    """Quadrature failed to converge or the integrand does not decay.

    :type estimate: :py:class:`complex`
    :param estimate: (Optional) last value obtained.

    :type error: :py:class:`float`
    :param error: (Optional) last error estimate.
    """

    kind = "quadrature_not_converged"

    def __init__(self, message, module="quadrature", estimate=None, error=None):
        details = {}
        if estimate is not None:
            details["estimate_re"] = float(complex(estimate).real)
            details["estimate_im"] = float(complex(estimate).imag)
        if error is not None:
            details["error"] = float(error)
        super().__init__(message, module=module, details=details)
        self.estimate = estimate
        self.error = error


class UnsupportedError(BetaCharpolyError, NotImplementedError):
    kind = "unsupported"


def fail(exc):
    """Logs ``exc`` at ERROR level and returns it, so call sites read
    ``raise fail(DomainError(...))``.

    :type exc: :py:class:`BetaCharpolyError`
    :param exc: the error about to be raised.

    :rtype: :py:class:`BetaCharpolyError`
    :returns: the same exception.
    """
    logging.getLogger(f"betacharpoly.{exc.module}").error(
        f"[{exc.kind}] {exc.message}"
    )
    return exc
