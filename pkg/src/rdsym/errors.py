"""Exception hierarchy.

Every error carries a short machine-readable ``code`` (e.g. ``"pole-of-ds"``)
that also appears in the message, so callers can match on either.
"""


class RDSymError(Exception):
    code = "rdsym-error"

    def __init__(self, message="", **context):
        self.context = context
        text = f"{self.code}: {message}" if message else self.code
        super().__init__(text)


class DomainError(RDSymError, ValueError):
    code = "domain-error"


class ModulusDegenerateError(DomainError):
    code = "modulus-degenerate"


class PoleError(DomainError):
    code = "pole-of-ds"

    def __init__(self, z, message=""):
        self.z = z
        super().__init__(message or f"sn vanishes at z={z!r}", z=z)


class SingularPointError(DomainError):
    code = "operator-singular-point"


class LogDomainError(DomainError):
    code = "log-domain"


class TimeSingularError(DomainError):
    code = "time-singular"


class ReductionNotClosedError(DomainError):
    code = "reduction-not-closed"


class RHSNonFiniteError(RDSymError, ArithmeticError):
    code = "rhs-nonfinite"

    def __init__(self, z):
        self.z = z
        super().__init__(f"right-hand side not finite at z={z!r}", z=z)


class CFLViolation(RDSymError, ValueError):
    code = "cfl-violation"


class BlowUpError(RDSymError, ArithmeticError):
    code = "blow-up"

    def __init__(self, time, message=""):
        self.time = time
        super().__init__(message or f"non-finite state at t={time!r}", time=time)


class ConfigError(RDSymError, ValueError):
    code = "config-error"

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(prefix + message)
