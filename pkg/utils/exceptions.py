from __future__ import annotations


class ToolkitError(Exception):
    """
    Base class for every error raised by the toolkit
    """

    code = "toolkit_error"

    def __init__(self, message: str, point: complex | None = None):
        super().__init__(message)
        self.point = point

    def to_dict(self) -> dict:
        payload = {"code": self.code, "message": str(self)}
        if self.point is not None:
            payload["point"] = [float(complex(self.point).real), float(complex(self.point).imag)]
        return payload


class ConfigError(ToolkitError):
    code = "config_error"


# series arithmetic

class DivisionByNonUnit(ToolkitError):
    code = "division_by_non_unit"


class NonzeroConstantTerm(ToolkitError):
    code = "nonzero_constant_term"


class EvaluationOutOfRange(ToolkitError):
    code = "evaluation_out_of_range"


# catalog

class UnknownFunction(ToolkitError):
    code = "unknown_function"


# operator evaluation

class EvaluationError(ToolkitError):
    code = "evaluation_error"


class CriticalPoint(EvaluationError):
    code = "critical_point"


class ZeroValue(EvaluationError):
    code = "zero_value"


class ZeroP(EvaluationError):
    code = "zero_p"


class DenominatorVanish(EvaluationError):
    code = "denominator_vanish"


class UnsupportedRoute(EvaluationError):
    code = "unsupported_route"


# certification

class UncertifiableClass(ToolkitError):
    code = "uncertifiable_class"


class RadiusOutOfRange(ToolkitError):
    code = "radius_out_of_range"


# schwarz functions and family construction

class OmegaNotCentered(ToolkitError):
    code = "omega_not_centered"


class NonUnitP(ToolkitError):
    code = "non_unit_p"


class UnsupportedLabel(ToolkitError):
    code = "unsupported_label"


class UVanishes(ToolkitError):
    code = "u_vanishes"


class InvalidSchwarzSpec(ToolkitError):
    code = "invalid_schwarz_spec"


# command line

class UsageError(ToolkitError):
    code = "usage_error"
