"""Exceptions shared by the search kernels and the solver."""


class BudgetExceeded(RuntimeError):
    """The search visited more nodes than its budget allows."""

    def __init__(self, budget: int) -> None:
        super().__init__(f"node budget of {budget} states exceeded")
        self.budget = budget
