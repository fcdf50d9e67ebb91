"""
Custom exceptions for Hyperharmonics
"""


class HyperHarmonicsError(Exception):
    """Base exception for hyperharmonics errors."""
    pass


class ConfigurationError(HyperHarmonicsError):
    """Exception raised when configuration is invalid or missing."""
    pass


class DomainError(HyperHarmonicsError):
    """Exception raised when an argument lies outside a function's domain."""
    pass


class SingularityError(DomainError):
    """Exception raised when a function is evaluated at its singular point."""
    pass


class OutOfDomainError(DomainError):
    """Exception raised when an argument leaves the validated series domain."""
    pass


class DivergenceError(HyperHarmonicsError):
    """Exception raised when a series is evaluated outside its disc of convergence."""
    pass


class ConvergenceError(HyperHarmonicsError):
    """Exception raised when a series fails to converge within the term cap."""
    pass


class ComplexParameterError(HyperHarmonicsError):
    """Exception raised when a radical would make a parameter complex."""
    pass


class UnsupportedCombinationError(HyperHarmonicsError):
    """Exception raised for parameter combinations the library does not evaluate."""
    pass


class ModeSpecError(HyperHarmonicsError):
    """Exception raised when a mode specification is malformed or inconsistent."""
    pass


class CheckFailedError(HyperHarmonicsError):
    """Exception raised when an acceptance check fails."""
    pass
