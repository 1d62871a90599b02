"""Exact B-model pipeline: periods, mirror maps, holomorphic anomaly amplitudes."""

__version__ = "0.1.0"

from .series import LaurentLogSeries, EpsJet, SeriesError, series, theta, bernoulli  # noqa: F401
from .picard_fuchs import PFOperator, frobenius_mum, apply_operator  # noqa: F401
from .special_geometry import GeometryData, mirror_map, yukawa, connection_limits  # noqa: F401
from .config import load_geometry  # noqa: F401
