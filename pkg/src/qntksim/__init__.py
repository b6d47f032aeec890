"""Tangent-kernel simulator and concentration analysis for variational quantum circuits."""

__version__ = "0.1.0"

from .ansatz import (
    Gate,
    ParamCircuit,
    ParamVector,
    amplitude_encode,
    build_circuit,
    init_params,
    run,
    sample_haar_state,
    sample_local_haar_state,
)
from .concentration import (
    BoundReport,
    ExperimentRecord,
    SweepConfig,
    SweepResult,
    chebyshev_tail,
    fit_slope,
    kernel_samples,
    run_sweep,
    sample_cell,
    variance_bound,
)
from .expressibility import (
    ExpressibilityReport,
    ensemble_sampler,
    measure,
    moment_operator,
    reference_operator,
    trace_norm,
)
from .haar import (
    MomentTensor1,
    MomentTensor2,
    empirical_moment,
    haar_unitary,
    haar_unitaries,
    local_moment2_reference,
    weingarten_moment1,
    weingarten_moment2,
)
from .qntk import (
    KernelMatrix,
    LabeledState,
    gd_train,
    gradient,
    gradient_finite_diff,
    gradient_param_shift,
    gram_matrix,
    lazy_dynamics,
    qntk_value,
    residual,
)
from .statevector import (
    Observable,
    Statevector,
    apply_cnot,
    apply_rx,
    apply_rz,
    basis_state,
    expectation,
    inner_product,
)

__all__ = [
    "__version__",
    "Gate",
    "ParamCircuit",
    "ParamVector",
    "amplitude_encode",
    "build_circuit",
    "init_params",
    "run",
    "sample_haar_state",
    "sample_local_haar_state",
    "BoundReport",
    "ExperimentRecord",
    "SweepConfig",
    "SweepResult",
    "chebyshev_tail",
    "fit_slope",
    "kernel_samples",
    "run_sweep",
    "sample_cell",
    "variance_bound",
    "ExpressibilityReport",
    "ensemble_sampler",
    "measure",
    "moment_operator",
    "reference_operator",
    "trace_norm",
    "MomentTensor1",
    "MomentTensor2",
    "empirical_moment",
    "haar_unitary",
    "haar_unitaries",
    "local_moment2_reference",
    "weingarten_moment1",
    "weingarten_moment2",
    "KernelMatrix",
    "LabeledState",
    "gd_train",
    "gradient",
    "gradient_finite_diff",
    "gradient_param_shift",
    "gram_matrix",
    "lazy_dynamics",
    "qntk_value",
    "residual",
    "Observable",
    "Statevector",
    "apply_cnot",
    "apply_rx",
    "apply_rz",
    "basis_state",
    "expectation",
    "inner_product",
]
