"""lp-Vietoris-Rips filtrations, persistence and blurred magnitude homology of finite metric spaces."""

from ._backend import BACKEND
from .circle import circle_experiment, sample_circle, t_grid_search, threshold_formula
from .complexes import (
    FilteredComplex,
    SimplicialComplex,
    TupleChainComplex,
    build_tuple_complex,
    build_vr_filtration,
    nerve_complex,
    sandwich_check,
    ss_of_complex,
)
from .errors import CapExceededError, CoverError, FiltrationError, InputError, LpripsError, MapError, MetricError
from .homology import (
    Barcode,
    betti,
    chain_homotopy_check,
    homology,
    induced_map,
    les_magnitude_check,
    magnitude_homology,
    mayer_vietoris_check,
    persistence,
)
from .metric import (
    INF,
    FiniteMetricSpace,
    LeftInterval,
    NormDescriptor,
    from_points,
    kolmogorov_quotient,
    norm_constant,
    norm_eval,
    validate_metric,
)
from .stability import bottleneck, gromov_hausdorff, stability_campaign, stability_report
from .weights import cho_membership, subset_weight, tuple_weight, tuple_weight_oracle

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "INF",
    "Barcode",
    "CapExceededError",
    "CoverError",
    "FilteredComplex",
    "FiltrationError",
    "FiniteMetricSpace",
    "InputError",
    "LeftInterval",
    "LpripsError",
    "MapError",
    "MetricError",
    "NormDescriptor",
    "SimplicialComplex",
    "TupleChainComplex",
    "betti",
    "bottleneck",
    "build_tuple_complex",
    "build_vr_filtration",
    "chain_homotopy_check",
    "cho_membership",
    "circle_experiment",
    "from_points",
    "gromov_hausdorff",
    "homology",
    "induced_map",
    "kolmogorov_quotient",
    "les_magnitude_check",
    "magnitude_homology",
    "mayer_vietoris_check",
    "nerve_complex",
    "norm_constant",
    "norm_eval",
    "persistence",
    "sample_circle",
    "sandwich_check",
    "ss_of_complex",
    "stability_campaign",
    "stability_report",
    "subset_weight",
    "t_grid_search",
    "threshold_formula",
    "tuple_weight",
    "tuple_weight_oracle",
    "validate_metric",
]
