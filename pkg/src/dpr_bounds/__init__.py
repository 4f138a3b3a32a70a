"""Upper bounds on secret key rates of distributed-phase-reference QKD.

Evaluates and optimizes Eve's information for collective beam-splitting,
one-pulse and two-pulse attacks on the COW protocol family and DPS, in
the long-distance limit where every bound scales linearly with the
channel transmission.
"""

from .bsa import (
    BsaPoint,
    asymptotic_optimum,
    chi_bsa_cow,
    chi_bsa_dps,
    optimize_bsa,
    rate_bsa,
)
from .channel import (
    COW,
    COWM1,
    COWM2,
    DPS,
    PROTOCOLS,
    ChannelModel,
    ProtocolConfig,
    detection_probability,
    devetak_winter_rate,
    effective_channel,
    sifting_rate,
    transmission,
)
from .cow_attacks import (
    CowM1Attack,
    CowM2Attack,
    CowTwoPulseAttack,
    cow2pa_chi,
    cow2pa_min_overlap,
    cow2pa_rate0,
    cowm1_chi,
    cowm1_optimize,
    cowm2_chi,
    cowm2_min_overlap,
    cowm2_rate0,
)
from .dps_attacks import (
    Dps1paAttack,
    Dps2paAttack,
    DpsChiPair,
    dps1pa_chi,
    dps1pa_optimize,
    dps2pa_build,
    dps2pa_chi,
    dps2pa_optimize,
    dps_rate0,
)
from .optimize import OptConfig, OptResult, maximize, maximize_scalar
from .quantum import (
    DensityMatrix,
    GramSpec,
    StateVector,
    binary_entropy,
    gram_embed,
    holevo_binary,
    pure_pair_chi,
    tensor_product,
    von_neumann_entropy,
)
from .variants import VariantSpec, variant_sifting_rate, z_channel_rate

__version__ = "0.1.0"
