'''exceptions raised by the tropical_pseudostable package'''


class TropicalModuliError(Exception):
    '''base class for every error raised by this package'''


class InvalidGraphError(TropicalModuliError, ValueError):
    '''a dual graph violates its structural invariants'''


class OutOfRangeError(TropicalModuliError, ValueError):
    '''(g, n), an edge bound or a weight vector is outside the admitted range'''


class PseudostabilizationError(TropicalModuliError, ValueError):
    '''a graph cannot be pseudostabilized'''


class IncompatibleFunctionError(TropicalModuliError, ValueError):
    '''a piecewise polynomial is not Aut-invariant or not face compatible'''


class MapConstructionError(TropicalModuliError, RuntimeError):
    '''a piecewise-linear map failed its well-definedness check'''


class UnsupportedClassError(TropicalModuliError, NotImplementedError):
    '''the requested intersection computation is outside the supported range'''


class DegreeError(TropicalModuliError, ValueError):
    '''an expression does not have the degree required by the operation'''


class ExpressionSyntaxError(TropicalModuliError, ValueError):
    '''a piecewise polynomial expression could not be parsed'''


class UnknownConeError(TropicalModuliError, LookupError):
    '''no cone of the complex answers to the given name'''
