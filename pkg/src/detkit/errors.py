class DetkitError(Exception):
    """Base class for all errors raised by detkit."""


class InputError(DetkitError, ValueError):
    pass


class FormSyntaxError(InputError):
    pass


class InhomogeneousError(InputError):
    pass


class ZeroFormError(InputError):
    pass


class BudgetExceeded(DetkitError):
    """A search or enumeration would exceed its configured size cap."""


class ConstructionCapReached(DetkitError):
    """The degree escalation in `construct` hit its hard cap.

    ``attempts`` carries the per-degree audit rows so the caller can report
    why no auxiliary form was found.
    """

    def __init__(self, message, attempts=()):
        super().__init__(message)
        self.attempts = list(attempts)
