"""qnetcode: measurement-based quantum network coding toolkit.

Subpackages cover the exact graph-rule engine (:mod:`qnetcode.graphstate`),
the dense oracle/noisy backend (:mod:`qnetcode.densesim`), the butterfly
network-coding protocol (:mod:`qnetcode.butterfly`), the generalized
non-blocking switch (:mod:`qnetcode.switchnet`), hardware topologies and
the rewiring compiler (:mod:`qnetcode.topology`, :mod:`qnetcode.compiler`),
shot sampling and readout mitigation (:mod:`qnetcode.sampling`), and the
figures of merit (:mod:`qnetcode.metrics`, :mod:`qnetcode.tomography`).
"""

from .graphstate import GraphState, MeasureOutcome
from .densesim import DenseState, NoiseModel

__all__ = ["GraphState", "MeasureOutcome", "DenseState", "NoiseModel"]

__version__ = "0.1.0"
