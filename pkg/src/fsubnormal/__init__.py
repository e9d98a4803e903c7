"""Generalised subnormality and Sylow-normalizer classes for finite permutation groups.

Groups are enumerated in full (see ``DEFAULT_ORDER_CAP``); subgroups are
bitmasks over the parent's element list.  The usual entry points::

    from fsubnormal import named_example, parse_formation, as_subgroup, is_kf_subnormal
"""
from .builder import (
    NAMED_EXAMPLES,
    affine_semidirect,
    alternating,
    cyclic,
    dihedral,
    direct_product,
    named_example,
    parse,
    read_group_file,
    serialize,
    symmetric,
)
from .errors import (
    FormationViolation,
    GroupError,
    InvalidPermutation,
    NotFound,
    NotNormal,
    NotSoluble,
    OrderCapExceeded,
    ParseError,
    SingularMatrix,
    SubgroupNotContained,
    UnknownExample,
    UnknownFormation,
)
from .formations import BUILTIN_TOKENS, FormationSpec, builtin, parse_formation, residual
from .permgroup import (
    DEFAULT_INTERVAL_BOUND,
    DEFAULT_ORDER_CAP,
    PermGroup,
    Permutation,
    QuotientMap,
    Subgroup,
    as_subgroup,
    closure,
    core,
    generate,
    interval,
    is_normal,
    join,
    maximal_subgroups,
    normal_closure,
    normalizer,
    quotient,
)
from .primes import ALL_PRIMES, PrimeSet
from .structure import (
    arithmetic_length,
    fitting,
    is_nilpotent,
    is_soluble,
    is_supersoluble,
    minimal_normal_subgroups,
    nilpotent_length,
    normal_subgroups,
    p_length,
    pi,
    sylow,
    sylow_subgroups,
)
from .subnormality import (
    ChainCertificate,
    Witness,
    certificate_audit,
    in_W,
    in_W_bar,
    in_w_star,
    is_f_subnormal,
    is_kf_subnormal,
    is_kp_subnormal,
    is_p_subnormal,
    is_strongly_kf_subnormal,
    is_subnormal,
    validate_certificate,
    wstar_formation,
)

__version__ = "0.1.0"
