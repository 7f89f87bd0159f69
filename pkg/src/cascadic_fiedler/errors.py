"""Exception types raised by the solver stack."""


class GraphError(ValueError):
    """Invalid graph or Laplacian input."""


class DisconnectedGraphError(GraphError):
    """The graph has more than one connected component."""

    def __init__(self, n_components, message=None):
        self.n_components = int(n_components)
        super().__init__(message or f"graph is disconnected ({self.n_components} components)")


class ZeroDiagonalError(ArithmeticError):
    """Gauss-Seidel met a zero diagonal entry."""

    def __init__(self, index):
        self.index = int(index)
        super().__init__(f"zero diagonal entry at row {self.index}")


class CollapsedIterateError(ArithmeticError):
    """An eigen-iterate became numerically zero after removing the constant component."""


class SolverError(RuntimeError):
    """The multilevel solve could not produce a Fiedler vector."""


class ParseError(ValueError):
    """Malformed graph or matrix file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
