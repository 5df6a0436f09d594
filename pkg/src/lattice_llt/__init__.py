"""Exact lattice sums, Bernoulli-part decomposition, correlation bounds and the
almost sure local limit theorem for i.i.d. lattice random walks."""

from .errors import (
    BadOrder,
    DegenerateLaw,
    DomainError,
    EmptyGrid,
    InadmissibleTau,
    LatticeError,
    NoBernoulliPart,
    NonMaximalSpan,
    SumNotOne,
    SupportTooLarge,
)
from .lattice import DistStats, LatticePmf, load_pmf, normalize_span, validate
from .convolve import SumCache, SumDistribution, convolve_n, iter_sums, joint_prob, prob_at
from .bernoulli import (
    BernoulliPart,
    DecompositionSample,
    TauSequence,
    build_part,
    canonical_tau,
    exact_decomposition_law,
    reconstructed_law,
    sample_decomposition,
)
from .tail_bounds import ChernoffParams, binom_log_cdf, chernoff_params, log_psi, psi, solve_theta, verify_chernoff
from .llt import LltErrorCurve, bernoulli_llt_error, gauss_local, llt_error, llt_limit
from .correlation import (
    CorrelationRecord,
    KappaSequence,
    ScanResult,
    bound_scan,
    decade_grid,
    exact_cov,
    kappa_sequence,
    pow2_grid,
    stats_and_sequence,
)
from .asllt import (
    AslltRun,
    EnsembleSummary,
    expected_average,
    expected_average_curve,
    run_ensemble,
    run_path,
)

__version__ = "0.1.0"
