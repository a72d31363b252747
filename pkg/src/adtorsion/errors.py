"""Exception hierarchy shared by all modules.

Errors fall in three groups that the command line maps to exit codes:
validation problems with the input data, degenerate numerical assemblies,
and everything else.
"""


class TorsionError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(TorsionError):
    """Input data violates a structural or numerical precondition."""


# linalg
class NotInSpan(ValidationError):
    pass


class NotSquare(ValidationError):
    pass


# liealg
class SizeMismatch(ValidationError):
    pass


class UnknownLetter(ValidationError):
    pass


class NotUnimodular(ValidationError):
    def __init__(self, letter, det):
        super().__init__(f"image of letter {letter} has determinant {det!r}, not 1")
        self.letter = letter
        self.det = det


class RelatorViolated(ValidationError):
    def __init__(self, index, deviation):
        super().__init__(f"relator {index} evaluates {deviation:.3e} away from the identity")
        self.index = index
        self.deviation = deviation


# cellsys
class AlphabetMismatch(ValidationError):
    pass


class NotAChainComplex(ValidationError):
    def __init__(self, p, norm):
        super().__init__(f"boundary composition at degree {p} has max norm {norm:.3e}")
        self.p = p
        self.norm = norm


class DegreeOutOfRange(ValidationError):
    pass


class BadIdentification(ValidationError):
    pass


class MalformedCellSystem(ValidationError):
    pass


# torsion
class BasisNotCycles(ValidationError):
    pass


class BasisDependentModBoundaries(ValidationError):
    pass


class DegenerateAssembly(TorsionError):
    pass


class NotAcyclic(ValidationError):
    def __init__(self, p):
        super().__init__(f"complex is not exact at index {p}")
        self.p = p


class NotExact(ValidationError):
    def __init__(self, index, detail=""):
        super().__init__(f"Mayer-Vietoris sequence is not exact at index {index}{detail}")
        self.index = index


class NoNonzeroHomology(ValidationError):
    pass


# spaces
class UnknownRecipe(ValidationError):
    pass


class BadParams(ValidationError):
    pass


class NoThreeCell(ValidationError):
    pass


# cli
class ParseError(TorsionError):
    pass
