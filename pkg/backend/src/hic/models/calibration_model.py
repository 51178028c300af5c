"""Calibration file schema (version 1)"""

from typing import List, Optional
from pydantic import BaseModel, Field, ConfigDict, field_validator


CALIBRATION_SCHEMA_VERSION = 1


class QubitCalibration(BaseModel):
    """Per-qubit calibration entry"""

    model_config = ConfigDict(extra='forbid')

    id: int = Field(..., ge=0, description="Physical qubit index")
    readout_error: float = Field(..., description="Readout assignment error rate")
    sx_error: float = Field(..., description="Single-qubit gate error rate")


class EdgeCalibration(BaseModel):
    """Per-edge calibration entry (direction-independent)"""

    model_config = ConfigDict(extra='forbid')

    q0: int = Field(..., ge=0, description="First physical qubit")
    q1: int = Field(..., ge=0, description="Second physical qubit")
    cx_error: float = Field(..., description="Two-qubit gate error rate")


class CalibrationDocument(BaseModel):
    """Top-level calibration document"""

    model_config = ConfigDict(populate_by_name=True, extra='forbid')

    schema_version: int = Field(..., alias="schema", description="Schema version, must be 1")
    name: Optional[str] = Field(default=None, description="Device or fixture name")
    timestamp: Optional[str] = Field(default=None, description="Calibration timestamp label")
    qubits: List[QubitCalibration] = Field(..., min_length=1, description="Qubit entries")
    edges: List[EdgeCalibration] = Field(default_factory=list, description="Edge entries")

    @field_validator('schema_version')
    @classmethod
    def check_version(cls, value: int) -> int:
        if value != CALIBRATION_SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {value}, expected {CALIBRATION_SCHEMA_VERSION}")
        return value
