"""Shared error hierarchy.

Every user-facing failure maps onto one of these classes so the HTTP layer
and the CLI can translate them uniformly (status codes, exit codes).
"""


class TrustnetError(Exception):
    """Base class for expected, user-reportable failures."""

    kind = "error"


class ValidationError(TrustnetError):
    """Malformed input: bad value, bad range, bad format."""

    kind = "validation"


class AuthenticationError(TrustnetError):
    """Missing or invalid session credentials."""

    kind = "authentication"


class AuthorizationError(TrustnetError):
    """Authenticated caller lacks the required role or membership."""

    kind = "authorization"


class NotFoundError(TrustnetError):
    """Referenced entity (user, edge, post, candidacy, token) is unknown."""

    kind = "not_found"


class ConflictError(TrustnetError):
    """State already exists or forbids the transition."""

    kind = "conflict"


class ImmunizedError(ConflictError):
    """Admission attempt with a permanently banned identity fingerprint."""

    kind = "conflict"


class ConnectivityError(TrustnetError):
    """Remote endpoint unreachable (client-side only)."""

    kind = "connectivity"


ERROR_KINDS = {
    cls.kind: cls
    for cls in (
        ValidationError,
        AuthenticationError,
        AuthorizationError,
        NotFoundError,
        ConflictError,
        ConnectivityError,
    )
}
