"""Exception hierarchy shared by every module of the package."""


class HfhomError(Exception):
    """Base class for all package errors."""


class InvalidCoefficient(HfhomError, ValueError):
    pass


class NonPositiveCoefficient(InvalidCoefficient):
    pass


class UnknownBuiltin(HfhomError, KeyError):
    pass


class EigFailure(HfhomError, RuntimeError):
    def __init__(self, msg, k=None):
        super().__init__(msg if k is None else f"{msg} (k={k!r})")
        self.k = k


class KNotInGrid(HfhomError, KeyError):
    pass


class DegenerateEdge(HfhomError):
    """gamma(k0) vanishes: the quartic term is absent and the generic rates do not apply."""


class GaugeBreak(HfhomError):
    pass


class NoAdmissibleKappa(HfhomError):
    pass


class UnsupportedKind(HfhomError, ValueError):
    pass


class ZoneOverflow(HfhomError, ValueError):
    pass


class GridMismatch(HfhomError, ValueError):
    pass


class NegativeSpectralShift(HfhomError):
    pass


class InadmissibleParameters(HfhomError, ValueError):
    pass


class ParseError(HfhomError, ValueError):
    pass


class ValidationError(HfhomError, ValueError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
