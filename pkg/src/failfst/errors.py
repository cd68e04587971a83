"""Exception hierarchy.  Each domain error carries the short ``name`` the CLI
prints on stderr."""


class FstError(Exception):
    name = "fst-error"

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{self.name}: {msg}" if msg else self.name


class InvariantViolation(FstError):
    name = "invariant-violation"


class FormatSyntaxError(FstError):
    name = "syntax-error"

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class UndefinedPath(FstError):
    name = "undefined-path"


class EmptyMachine(FstError):
    name = "empty-machine"


class NotMonotonic(FstError):
    name = "not-monotonic"


class FailureCycle(FstError):
    name = "failure-cycle"


class InitialUndefined(FstError):
    name = "initial-undefined"


class EpsilonInDomain(FstError):
    name = "epsilon-in-domain"


class MultiSymbolOutput(FstError):
    name = "multi-symbol-output"


class PreconditionViolation(FstError):
    name = "precondition-violation"


class CyclicGraph(FstError):
    name = "cyclic-graph"


class NegativeLogWeight(FstError):
    name = "negative-log-weight"


class ZeroSumState(FstError):
    name = "zero-sum-state"


class AlphabetMismatch(FstError):
    name = "alphabet-mismatch"
