"""Shared exception types."""


class CapExceeded(RuntimeError):
    """An exact enumeration would exceed its configured size cap."""
