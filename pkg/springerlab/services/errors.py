# springerlab/services/errors.py

"""Exception hierarchy shared by the services."""


class SpringerLabError(Exception):
    """Base class for every error raised by springerlab."""


class UnsupportedTypeError(SpringerLabError):
    pass


class DomainMismatchError(SpringerLabError):
    pass


class BudgetExceededError(SpringerLabError):
    def __init__(self, required: int, budget: int, what: str = "enumeration"):
        self.required = required
        self.budget = budget
        super().__init__(f"{what} needs {required} steps, budget is {budget}")


class FixtureError(SpringerLabError):
    pass


class AmbiguityError(SpringerLabError):
    def __init__(self, message: str, candidates=None):
        self.candidates = list(candidates or [])
        super().__init__(message)


class ContradictionError(SpringerLabError):
    def __init__(self, message: str, conflicting=None):
        self.conflicting = list(conflicting or [])
        super().__init__(message)


class RelationFailure(SpringerLabError):
    def __init__(self, word: str):
        self.word = word
        super().__init__(f"relation {word} is neither trivial nor in the identity component")
