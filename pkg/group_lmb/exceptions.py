"""Exceptions raised by the group tracking filters and the simulator."""

from typing import Optional, Sequence


class GroupLmbException(Exception):
    pass


class LabelCollisionError(GroupLmbException):
    pass


class NumericalFailure(GroupLmbException):
    pass


class CombinatorialGuardError(GroupLmbException):
    pass


class GroupInconsistencyError(GroupLmbException):
    pass


class DegenerateUpdateError(GroupLmbException):
    """
    All hypothesis weights of an update vanished.

    Args:
        message: what went wrong
        step: scan index, attached by the trial loop once known
        seed: seed of the trial the update belonged to
    """
    def __init__(self, message: str, step: Optional[int] = None, seed: Optional[int] = None) -> None:
        super().__init__(message)
        self.step = step
        self.seed = seed

    def __str__(self) -> str:
        context = []
        if self.seed is not None:
            context.append(f'trial seed {self.seed}')
        if self.step is not None:
            context.append(f'step {self.step}')
        if not context:
            return super().__str__()
        return ', '.join(context) + f': {super().__str__()}'

    def __reduce__(self):
        return type(self), (self.args[0], self.step, self.seed)


class ScenarioError(GroupLmbException):
    """
    The scenario configuration did not validate.

    Args:
        diagnostics: one message per offending field, qualified as
            ``section.key``
    """
    def __init__(self, diagnostics: Sequence[str]) -> None:
        self.diagnostics = list(diagnostics)
        super().__init__('invalid scenario configuration:\n  '
                         + '\n  '.join(self.diagnostics))

    def __reduce__(self):
        return type(self), (self.diagnostics,)
