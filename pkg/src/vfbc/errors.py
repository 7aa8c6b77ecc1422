"""Exception types raised by the library.

Every error carries a stable ``name`` used by the CLI when reporting failures.
``ParseError`` subclasses signal malformed input (CLI exit code 2); everything
else under ``VfbcError`` is a domain error (exit code 1).
"""


class VfbcError(Exception):
    name = "VfbcError"


class ParseError(VfbcError):
    name = "ParseError"


class UnknownLetter(ParseError):
    name = "UnknownLetter"


class RankOutOfRange(ParseError):
    name = "RankOutOfRange"


class HierarchySyntaxError(ParseError):
    name = "SyntaxError"

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class GraphFormatError(ParseError):
    name = "GraphFormatError"


class NegativeRank(ParseError):
    name = "NegativeRank"


class PreconditionViolated(VfbcError):
    name = "PreconditionViolated"


class RankMismatch(VfbcError):
    name = "RankMismatch"


class EmptyWord(VfbcError):
    name = "EmptyWord"


class InvalidAvoidSet(VfbcError):
    name = "InvalidAvoidSet"


class SearchBudgetExhausted(VfbcError):
    name = "SearchBudgetExhausted"


class TrivialGroup(VfbcError):
    name = "TrivialGroup"


class IndependenceNotAssumed(VfbcError):
    name = "IndependenceNotAssumed"


class InconsistentHierarchy(VfbcError):
    name = "InconsistentHierarchy"


class TooFewGenerators(VfbcError):
    name = "TooFewGenerators"


class InconsistentFlags(VfbcError):
    name = "InconsistentFlags"


class ParameterOutOfRange(VfbcError):
    name = "ParameterOutOfRange"
