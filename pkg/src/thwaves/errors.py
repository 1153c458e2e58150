from typing import Optional


class ThwavesError(ValueError):
    def __init__(self, message: str, code: str = "invalid_input") -> None:
        super().__init__(message)
        self.code = code


class GridError(ThwavesError):
    def __init__(self, message: str) -> None:
        super().__init__(message, code="invalid_grid")


class BesselDomainError(ThwavesError):
    def __init__(self, message: str) -> None:
        super().__init__(message, code="bessel_domain")


class SpectralError(ThwavesError):
    def __init__(self, message: str, mode: Optional[int] = None) -> None:
        super().__init__(message, code="non_finite_mode")
        self.mode = mode


class OracleRegimeError(ThwavesError):
    def __init__(self, message: str) -> None:
        super().__init__(message, code="oracle_regime")


class ConfigError(ThwavesError):
    def __init__(self, message: str) -> None:
        super().__init__(message, code="invalid_config")
