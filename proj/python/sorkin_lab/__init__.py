# Copyright 2026 The sorkin-lab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Seven-experiment qutrit test of third-order interference."""

from ._core import (
    ArgumentError,
    Channel,
    DegenerateProtocolError,
    DetectionParams,
    HamiltonianParams,
    InsufficientBatchesError,
    IntegrationError,
    KappaEstimate,
    MeasurementSpec,
    NonUnitaryError,
    NormalizationError,
    NotQuantumRegimeError,
    ProbabilityRule,
    SensitivityRow,
    SensitivityTable,
    SorkinLabError,
    SorkinReport,
    TargetAmplitudes,
    UnphysicalParameterError,
    __version__,
    analyze_probabilities,
    estimate_kappa,
    measurement_ket,
    prepare_states,
    rotation_r1,
    rotation_r2,
    run_batches,
    run_cli,
    run_protocol_batch,
    rwa_fidelity,
    sensitivity_scan,
    solve_schedule,
    sorkin_term,
    true_probabilities,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
