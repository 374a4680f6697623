"""Linear-subpacketization MISO coded caching from half-sum disjoint packings."""
from .errors import (
    DecodeFailure,
    DegenerateRecursion,
    HsdpCachingError,
    ModulusTooSmall,
    NoFeasiblePoint,
    NonIntegralBlockDim,
    ParameterError,
    RankDeficiency,
)
from .hsdp import (
    ConstructionParams,
    Hsdp,
    HsdpReport,
    ResidueRing,
    basis,
    construct_hsdp,
    minimal_tail_length,
    phi,
    phi_closed_form,
    recursive_f,
    verify_hsdp,
)
from .mapda import STAR, Mapda, MapdaReport, SchemeParams, build_mapda, drop_virtual_user, scheme_params, verify_mapda
from .params import DesignPoint, corollary_point, feasible, search_best, suboptimal_point
from .delivery import ChannelMatrix, SimReport, place, simulate, zf_precoder
from .baselines import BaselineResult, compare_sweep, ctwwl, npr, wcc, write_csv, ywcc1, ywcc1_best, ywcc2
from .kernels import BACKEND
from importlib import resources as _resources
import json as _json

__version__ = "0.1.0"


def load_fixture(name: str) -> dict:
    """Parsed JSON of a bundled fixture, e.g. ``load_fixture("example1")``."""
    ref = _resources.files(__name__).joinpath("fixtures", f"{name}.json")
    return _json.loads(ref.read_text(encoding="utf-8"))
