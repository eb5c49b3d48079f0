"""Circuit fidelity of Pauli-twirled circuits under correlated Gaussian dephasing."""

from ._twirlcorr import (
    __version__,
    analytic_fidelity,
    covariance_matrix,
    eigenvalue_gaussian,
    fidelity_bounds,
    mc_fidelity,
    parse_qasm,
    run_repcode,
    sample_noise,
)

__all__ = [
    "__version__",
    "analytic_fidelity",
    "covariance_matrix",
    "eigenvalue_gaussian",
    "fidelity_bounds",
    "mc_fidelity",
    "parse_qasm",
    "run_repcode",
    "sample_noise",
]
