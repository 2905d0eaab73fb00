"""Exception types shared across the library."""


class NetInfError(Exception):
    """Base class for all library errors."""


# -- naming ------------------------------------------------------------

class InvalidLabel(NetInfError):
    """Label is empty, too long, or contains reserved characters."""


class EmptyContent(NetInfError):
    """Content-addressed names require non-empty content."""


class ParseError(NetInfError):
    """Malformed canonical name text."""


# -- topology ----------------------------------------------------------

class UnknownEntity(NetInfError):
    """Referenced entity does not exist in the graph."""


class DuplicateEntity(NetInfError):
    """Entity id already in use."""


class IllegalAttachment(NetInfError):
    """Attachment violates the entity-kind rules or edge state."""


class CycleDetected(NetInfError):
    """Attachment would create a cycle among access nodes."""


class Unreachable(NetInfError):
    """No path exists between the requested endpoints."""


# -- registers ---------------------------------------------------------

class UnknownAR(NetInfError):
    """No attachment register at the given address."""


# -- resolution / routing / content ------------------------------------

class NameNotFound(NetInfError):
    """Name has no published copy in the resolution system."""


class Detached(NetInfError):
    """Entity has no attachment chain reaching an edge router."""


class NoCandidates(NetInfError):
    """Locator selection invoked with an empty candidate set."""


class VerificationFailed(NetInfError):
    """Payload does not verify against a content-hash name."""


class UnknownHost(NetInfError):
    """Referenced host does not exist."""


# -- harness -----------------------------------------------------------

class ScenarioError(NetInfError):
    """Scenario text failed to parse; carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class RunError(NetInfError):
    """Event application failed while running a scenario."""

    def __init__(self, tick: int, directive: str, cause: Exception):
        super().__init__(f"tick {tick}: {directive!r}: {cause}")
        self.tick = tick
        self.directive = directive
        self.cause = cause
