"""Resource theory of dephasing estimation: Fisher information, free operations and their classifiers."""

from .channels import (
    KrausChannel,
    apply,
    cd_channel,
    channels_equal,
    choi_of,
    compose,
    mix,
    paper_channel,
    pd_channel,
    validate_cptp,
)
from .classify import (
    ClassVerdict,
    Verdict,
    hierarchy_report,
    is_dio,
    is_hdp,
    is_sio_decomposition,
    is_shp_decomposition,
    shp_nonmembership_certifier,
    sio_nonmembership_by_l1,
)
from .core import BlochVector, density_from_bloch, hamiltonian, l1_coherence, pure
from .fisher import classical_fi, dephasing_qfi, pe_qfi, qfi, qfi_fidelity_oracle, witness_povm
from .hamming import HDFunction, enumerate_hdf, factor_hdf, is_hdf
from .transform import (
    ConeQuery,
    MergeSpec,
    cone_boundary,
    extreme_cone_channel,
    golden_transform,
    hdp_cone_contains,
    hdp_offdiag_bound,
    hdp_unitary,
    merge_channel,
    random_shp,
)

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "ClassVerdict",
    "ConeQuery",
    "HDFunction",
    "KrausChannel",
    "MergeSpec",
    "Verdict",
    "apply",
    "cd_channel",
    "channels_equal",
    "choi_of",
    "classical_fi",
    "compose",
    "cone_boundary",
    "density_from_bloch",
    "dephasing_qfi",
    "enumerate_hdf",
    "extreme_cone_channel",
    "factor_hdf",
    "golden_transform",
    "hamiltonian",
    "hdp_cone_contains",
    "hdp_offdiag_bound",
    "hdp_unitary",
    "hierarchy_report",
    "is_dio",
    "is_hdf",
    "is_hdp",
    "is_shp_decomposition",
    "is_sio_decomposition",
    "l1_coherence",
    "merge_channel",
    "mix",
    "paper_channel",
    "pd_channel",
    "pe_qfi",
    "pure",
    "qfi",
    "qfi_fidelity_oracle",
    "random_shp",
    "shp_nonmembership_certifier",
    "sio_nonmembership_by_l1",
    "validate_cptp",
    "witness_povm",
]
