class BudgetExceeded(RuntimeError):
    """A configured vertex, storage or time budget was exhausted."""


class CertificateError(AssertionError):
    """An LP or hull certificate failed exact re-verification."""
