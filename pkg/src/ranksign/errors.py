"""Exception types shared across the package."""


class RankSignError(Exception):
    pass


class ZeroInverse(RankSignError, ZeroDivisionError):
    pass


class NoSolution(RankSignError, ValueError):
    pass


class Singular(RankSignError, ValueError):
    pass


class HypothesisViolated(RankSignError, ValueError):
    pass


class TooLarge(RankSignError, ValueError):
    pass


class InvalidParams(RankSignError, ValueError):
    pass


class ResourceExhausted(RankSignError, RuntimeError):
    pass


class DecodingFailure(RankSignError):
    """Raised by the LRPC decoder; ``failed`` names the violated conditions."""

    def __init__(self, failed, message=None):
        self.failed = frozenset(failed)
        super().__init__(message or "decoding failure: condition(s) %s" % ",".join(sorted(self.failed)))


class WireError(RankSignError, ValueError):
    pass


class BadMagic(WireError):
    pass


class BadVersion(WireError):
    pass


class BadKind(WireError):
    pass


class Truncated(WireError):
    pass


class TrailingBytes(WireError):
    pass


class RankFieldMismatch(WireError):
    pass


class MalformedKey(WireError):
    pass


class MalformedSignature(WireError):
    pass


class ZeroScalar(ZeroInverse):
    pass


class MalformedParams(WireError):
    pass
