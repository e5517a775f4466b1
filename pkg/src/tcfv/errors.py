"""Exception types shared across the solver."""

from __future__ import annotations


class ConfigurationError(ValueError):
    """Invalid case, mesh or labeling parameters."""


class ContractError(ValueError):
    """An operation was called with inputs violating its preconditions."""


class InvalidStateError(ValueError):
    """A gas state with nonpositive density or pressure.

    Attributes
    ----------
    density, pressure : float
        The first offending values encountered.
    index : tuple or None
        Array index of the offending state, when known.
    """

    def __init__(self, density, pressure, index=None):
        self.density = float(density)
        self.pressure = float(pressure)
        self.index = index
        where = f" at {index}" if index is not None else ""
        super().__init__(
            f"invalid state{where}: rho={self.density:.6g}, p={self.pressure:.6g}"
        )


class NoShockError(ValueError):
    """Normal upstream Mach number does not exceed one."""


class DivergedSolutionError(RuntimeError):
    """The time integration produced an invalid state.

    Attributes
    ----------
    cell : tuple or None
        (i, j) index of the first invalid cell.
    iteration : int or None
        Iteration (steady) or step (unsteady) at which it happened.
    """

    def __init__(self, message, cell=None, iteration=None):
        self.cell = cell
        self.iteration = iteration
        parts = [message]
        if cell is not None:
            parts.append(f"cell={tuple(int(c) for c in cell)}")
        if iteration is not None:
            parts.append(f"iteration={iteration}")
        super().__init__(", ".join(parts))
