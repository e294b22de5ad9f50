#!/usr/bin/env python3
"""
Error hierarchy for mollowsim

Every domain error carries the CLI exit code of its family so the
orchestrator can turn any failure into a machine-readable error record.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple


class MollowSimError(Exception):
    """Base class for all simulator errors"""
    exit_code = 1

    def to_record(self) -> Dict[str, Any]:
        """Machine-readable representation written by the CLI"""
        return {
            'error': type(self).__name__,
            'message': str(self),
            'exit_code': self.exit_code,
        }


# Configuration errors (exit 2)

class ConfigError(MollowSimError):
    exit_code = 2


class ParseError(ConfigError):
    """Config file missing or not parseable"""


class ValidationError(ConfigError):
    """Aggregated config violations, each tagged with its dotted key path"""

    def __init__(self, violations: Sequence[Tuple[str, str]]):
        self.violations: List[Tuple[str, str]] = list(violations)
        lines = [f"{path}: {message}" for path, message in self.violations]
        super().__init__(f"{len(self.violations)} config violation(s):\n  " + "\n  ".join(lines))

    def __reduce__(self):
        return (type(self), (self.violations,))

    def to_record(self) -> Dict[str, Any]:
        record = super().to_record()
        record['violations'] = [{'key': path, 'message': message} for path, message in self.violations]
        return record


# Numeric errors (exit 3)

class NumericError(MollowSimError):
    exit_code = 3


class EvaluationInsideMagnet(NumericError):
    """Field requested inside the magnet exclusion sphere"""

    def __init__(self, distance: float, radius: float, grid_index: Optional[Tuple[int, int]] = None):
        self.distance = distance
        self.radius = radius
        self.grid_index = grid_index
        where = f" at grid index {grid_index}" if grid_index is not None else ""
        super().__init__(
            f"evaluation point{where} is {distance:.6e} m from the dipole, "
            f"inside the exclusion radius {radius:.6e} m"
        )

    def __reduce__(self):
        return (type(self), (self.distance, self.radius, self.grid_index))

    def to_record(self) -> Dict[str, Any]:
        record = super().to_record()
        record['grid_index'] = list(self.grid_index) if self.grid_index is not None else None
        return record


class GridSpecError(NumericError):
    """Degenerate or malformed scan grid"""


class StepTooLarge(NumericError):
    """Integrator step violates the 50-steps-per-fastest-cycle rule"""


class DivisionByZeroCoupling(NumericError):
    """A derived scale needs a nonzero coupling strength"""


# Analysis errors (exit 4)

class AnalysisError(MollowSimError):
    exit_code = 4


class NonUniformSampling(AnalysisError):
    """Time series is not uniformly sampled or too short for the FFT"""


class PeaksNotFound(AnalysisError):
    """Fewer than three resolvable maxima in the triplet search band"""
