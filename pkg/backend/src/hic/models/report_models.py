"""Report and experiment models written by the command-line surface"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class BackendKind(str, Enum):
    """Simulation backends"""
    EXACT = "exact"
    NOISY = "noisy"


class RunStatus(str, Enum):
    """Outcome of a pipeline run"""
    SUCCESS = "success"
    NO_STRATEGY = "no_strategy"


class CheckStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INFO = "INFO"


class ComponentReport(BaseModel):
    """Connected island of the punctured map"""

    id: int = Field(..., description="Component id (ascending smallest qubit)")
    qubits: List[int] = Field(..., description="Physical qubits")
    edges: List[Tuple[int, int]] = Field(default_factory=list, description="Retained couplers")


class PunctureReport(BaseModel):
    """Puncturing outcome and the candidate constraint range"""

    z_v: float = Field(..., description="Qubit Z-score threshold")
    z_e: float = Field(..., description="Edge Z-score threshold")
    qubit_metric: str = Field(default="readout", description="Qubit rate used for outlier detection")
    outlier_qubits: List[int] = Field(default_factory=list, description="Qubits above the threshold")
    outlier_edges: List[Tuple[int, int]] = Field(default_factory=list, description="Edges above the threshold")
    removed_qubits: List[int] = Field(default_factory=list, description="All removed qubits")
    removed_edges: List[Tuple[int, int]] = Field(default_factory=list, description="All removed edges")
    retained_qubits: List[int] = Field(default_factory=list, description="Qubits kept")
    components: List[ComponentReport] = Field(default_factory=list, description="Islands")
    candidate_constraints: List[int] = Field(default_factory=list, description="Device constraints to sweep")


class StrategyReport(BaseModel):
    """Cut strategy summary plus its overhead"""

    device_constraint: int = Field(..., description="Maximum subcircuit width")
    gate_cuts: int = Field(..., ge=0, description="Number of gate cuts")
    wire_cuts: int = Field(..., ge=0, description="Number of wire cuts")
    actions: List[Dict[str, Any]] = Field(default_factory=list, description="Cut actions")
    widths: List[int] = Field(default_factory=list, description="Subcircuit widths")
    gamma: int = Field(..., description="Sampling overhead 3^g 4^w")
    canonical_executions: int = Field(..., description="9^g 16^w")
    actual_subexperiments: int = Field(..., description="Distinct subexperiment circuits")


class PlacementReport(BaseModel):
    """Best layout of one subcircuit"""

    subcircuit: int = Field(..., description="Subcircuit index")
    width: int = Field(..., description="Subcircuit width")
    component_id: int = Field(..., description="Component hosting the subcircuit")
    physical_qubits: List[int] = Field(..., description="Physical qubit of each subcircuit qubit")
    score: float = Field(..., ge=0.0, le=1.0, description="Layout score, lower is better")
    swaps: int = Field(default=0, description="SWAPs inserted by routing")


class CandidateReport(BaseModel):
    """Evaluation of one device constraint"""

    device_constraint: int = Field(..., description="Device constraint d")
    feasible: bool = Field(..., description="Within budget and fully placeable")
    reason: Optional[str] = Field(default=None, description="Why the candidate is infeasible")
    strategy: Optional[StrategyReport] = Field(default=None, description="Cut strategy found")
    placements: List[PlacementReport] = Field(default_factory=list, description="Per-subcircuit placements")
    weighted_score: Optional[float] = Field(default=None, description="Weighted layout score of the placements")
    norm2: Optional[float] = Field(default=None, description="Spread term of the objective")
    objective: Optional[float] = Field(default=None, description="Objective value at the configured alpha")


class SelectionReport(BaseModel):
    """Constraint sweep and winner"""

    circuit: str = Field(..., description="Circuit name")
    num_qubits: int = Field(..., description="Circuit width")
    k_max: int = Field(..., description="Cut budget")
    alpha: float = Field(default=1.0, description="Objective weight")
    puncture: PunctureReport
    candidates: List[CandidateReport] = Field(default_factory=list)
    winner: Optional[CandidateReport] = Field(default=None, description="Minimum-objective feasible candidate")


class ComparisonReport(BaseModel):
    """Selected strategy against the equal-partition baseline"""

    winner: Optional[CandidateReport] = None
    baseline: Optional[CandidateReport] = None
    delta_cuts: Optional[int] = Field(default=None, description="baseline cuts - winner cuts")
    execution_ratio: Optional[float] = Field(default=None, description="baseline / winner executions")
    delta_weighted_score: Optional[float] = Field(default=None, description="baseline weighted score - winner weighted score")


class ReconstructionReport(BaseModel):
    """Reconstructed expectation value of the selected strategy"""

    backend: BackendKind
    shots: Optional[int] = Field(default=None, description="Shots per subexperiment (noisy backend)")
    seed: Optional[int] = None
    expectation: float
    std_error: float = 0.0
    shots_used: int = 0
    subexperiments: int = Field(..., description="Executed subexperiment circuits")
    uncut_exact: Optional[float] = Field(default=None, description="Exact value of the uncut circuit")
    absolute_error: Optional[float] = None


class TimingReport(BaseModel):
    """Wall-clock split of a run (written separately from the report)"""

    preprocessing_seconds: float = 0.0
    execution_seconds: float = 0.0
    postprocessing_seconds: float = 0.0


class GeneratorSpec(BaseModel):
    """Circuit produced by a bundled generator"""

    model_config = ConfigDict(extra='forbid')

    kind: str = Field(..., pattern=r'^(ising|clifford|qaoa)$', description="Generator family")
    num_qubits: int = Field(..., ge=1)
    steps: int = Field(default=2, ge=1, description="Trotter steps or Clifford depth")
    seed: int = Field(default=0, description="Random Clifford seed")
    interaction: str = Field(default="rzz", pattern=r'^(rzz|cx)$')
    ordering: str = Field(default="sequential", pattern=r'^(sequential|brick)$')


class TopologySpec(BaseModel):
    """Synthetic calibration produced by ``gen_topology``"""

    model_config = ConfigDict(extra='forbid')

    kind: str = Field(..., pattern=r'^(line|grid|heavy_hex)$')
    size: Dict[str, int] = Field(default_factory=dict, description="n, rows/cols or cells")
    seed: int = 0
    outlier_fraction: float = Field(default=0.0, ge=0.0, le=1.0)


class ExperimentSpec(BaseModel):
    """Everything a pipeline run needs, validated before work starts"""

    model_config = ConfigDict(extra='forbid')

    circuit_path: Optional[Path] = Field(default=None, description="OpenQASM file")
    generator: Optional[GeneratorSpec] = None
    calibration_path: Optional[Path] = Field(default=None, description="Calibration JSON")
    topology: Optional[TopologySpec] = None
    z_v: float = Field(..., gt=0)
    z_e: float = Field(..., gt=0)
    k_max: int = Field(..., ge=1)
    backend: BackendKind = BackendKind.EXACT
    shots: int = Field(default=4096, ge=1)
    seed: int = 1234
    jobs: int = 1
    alpha: float = Field(default=1.0, ge=0.0, le=1.0)
    observable: Optional[str] = Field(default=None, description="Pauli label, default mean Z")
    dry_run: bool = False
    output_dir: Path = Path("./hic-output")

    @model_validator(mode='after')
    def check_sources(self) -> 'ExperimentSpec':
        if (self.circuit_path is None) == (self.generator is None):
            raise ValueError("exactly one of circuit_path and generator is required")
        if (self.calibration_path is None) == (self.topology is None):
            raise ValueError("exactly one of calibration_path and topology is required")
        return self


class RunReport(BaseModel):
    """Full pipeline result"""

    status: RunStatus
    spec: ExperimentSpec
    selection: SelectionReport
    comparison: ComparisonReport
    reconstruction: Optional[ReconstructionReport] = None


class CheckResult(BaseModel):
    """One acceptance check of a reproduction experiment"""

    name: str
    status: CheckStatus
    expected: Optional[Any] = None
    actual: Optional[Any] = None


class ExperimentResult(BaseModel):
    """Reproduction experiment outcome"""

    name: str
    status: CheckStatus
    checks: List[CheckResult] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict)


class ReproduceSummary(BaseModel):
    experiments: List[ExperimentResult] = Field(default_factory=list)
    passed: bool = True
