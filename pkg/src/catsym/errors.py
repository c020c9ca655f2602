"""Exception hierarchy shared by every catsym module."""


class CategoryError(Exception):
    """Base class for all catsym errors."""


class AxiomViolation(CategoryError):
    """A raw description fails one of the category axioms."""


class MissingComposite(AxiomViolation):
    def __init__(self, g, f):
        self.g, self.f = g, f
        super().__init__(f"missing composite {g} . {f}")


class IdentityLawViolation(AxiomViolation):
    def __init__(self, f, side):
        self.f, self.side = f, side
        super().__init__(f"identity law fails for {f} on the {side}")


class AssociativityViolation(AxiomViolation):
    def __init__(self, h, g, f):
        self.h, self.g, self.f = h, g, f
        super().__init__(f"associativity fails for ({h}, {g}, {f})")


class TypeMismatch(AxiomViolation):
    pass


class NotComposable(CategoryError):
    def __init__(self, g, f):
        self.g, self.f = g, f
        super().__init__(f"{g} . {f} is not composable")


class CapExceeded(CategoryError):
    def __init__(self, dimension, needed, cap):
        self.dimension, self.needed, self.cap = dimension, needed, cap
        super().__init__(f"{dimension}: need at least {needed}, cap is {cap}")


class BudgetExceeded(CategoryError):
    def __init__(self, what, budget):
        self.what, self.budget = what, budget
        super().__init__(f"{what}: search budget of {budget} nodes exhausted")


class StarNotClosed(CategoryError):
    pass


class NonCommutingSquare(CategoryError):
    pass


class NotACommutingTriangle(CategoryError):
    pass


class NoPscStructure(CategoryError):
    pass


class InternalDisagreement(CategoryError):
    """Two independent checks of the same property disagree."""


class ParseError(CategoryError):
    pass


class CatSyntaxError(ParseError):
    def __init__(self, line, col, expected):
        self.line, self.col, self.expected = line, col, expected
        super().__init__(f"line {line}, col {col}: expected {expected}")


class UnknownName(ParseError):
    def __init__(self, name, line=None):
        self.name, self.line = name, line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unknown name {name!r}{where}")


class DuplicateDefinition(ParseError):
    def __init__(self, name, line=None):
        self.name, self.line = name, line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate definition of {name!r}{where}")


class StructureError(CategoryError):
    """A witness structure is malformed (not merely failing a law)."""
