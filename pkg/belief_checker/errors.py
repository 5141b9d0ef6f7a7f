from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from belief_checker.model import ValidationReport


class BeliefCheckerError(Exception):
    """Base class for every error raised by belief_checker"""


class ModelLookupError(BeliefCheckerError, KeyError):
    """Unknown run, point, agent, variable, group or stamp function"""

    def __init__(self, kind: str, name: object):
        self.kind = kind
        self.name = name
        super().__init__(f"unknown {kind}: {name!r}")

    def __str__(self) -> str:
        # KeyError.__str__ would repr() the message
        return str(self.args[0])


class ModelFormatError(BeliefCheckerError, ValueError):
    """Model document is malformed (rejected at load time)"""


class ModelValidationError(BeliefCheckerError):
    """A checker session was requested on a model that failed validation

    Args:
        report: the failing validation report
    """

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__(
            f"model failed validation with {len(report.violations)} violation(s), "
            f"first: {report.violations[0] if report.violations else None}"
        )


class FormulaSyntaxError(BeliefCheckerError, ValueError):
    def __init__(self, offset: int, line: int, column: int, expected: str, found: str):
        self.offset = offset
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        super().__init__(f"{line}:{column}: expected {expected}, found {found}")


class UnresolvedIdentifierError(BeliefCheckerError, LookupError):
    def __init__(self, kind: str, name: str, hint: Optional[str] = None):
        self.kind = kind
        self.name = name
        msg = f"unresolved {kind} {name!r}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class ContractViolationError(BeliefCheckerError, ValueError):
    """An operation was called outside of its contract"""


class ConfigError(BeliefCheckerError, ValueError):
    pass


class ScenarioError(BeliefCheckerError):
    pass
