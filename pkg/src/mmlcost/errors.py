"""Error types carrying the tool's process exit codes."""


class MMLError(Exception):
    code = 8

    def __init__(self, message, code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class FileUnreadable(MMLError):
    code = 1


class InvalidArgument(MMLError):
    code = 2


class VariablesInEvidence(MMLError):
    code = 4


class ExampleNotCovered(MMLError):
    code = 5


class ClauseBodyInEvidence(MMLError):
    code = 6


class RepetitionNotInteger(MMLError):
    code = 7


class PrologSyntaxError(MMLError):
    code = 8

    def __init__(self, message, line=None, column=None, origin=None):
        where = ""
        if line is not None:
            where = f"{origin or '<input>'}:{line}:{column}: "
        super().__init__(where + message)
        self.line = line
        self.column = column


class ReservedName(PrologSyntaxError):
    pass


class UnsolvableNormalization(MMLError):
    code = 9


class RoleViolation(MMLError):
    code = 12


class DuplicateDefinition(MMLError):
    code = 14


class NonTerminatingRule(MMLError):
    code = 15


class SumExceedsOne(MMLError):
    code = 16


class IncompatibleOptions(MMLError):
    code = 17


class ObjectiveInEvidence(MMLError):
    code = 18


class InfiniteModel(MMLError):
    code = 8


class UnresolvableComparison(MMLError):
    code = 8
