import argparse
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional

from typing_extensions import Self

from tautrenewal.api.error import TautError
from tautrenewal.api.internal import JsonObject, JsonObjectView
from tautrenewal.api.internal.csvio import PathLike
from tautrenewal.api.pathkit import PenaltySpec
from tautrenewal.utils import convert_penalties

logger = logging.getLogger(__name__)


class UsageError(TautError):
    """Malformed configuration or command line. Exit status 2."""


class ConfigDocument(JsonObjectView):
    """Campaign configuration as read from a JSON document."""

    def fields(self) -> JsonObject:
        known = {f.name for f in fields(CampaignConfig)}
        unknown = sorted(set(self._data) - known)
        if unknown:
            raise UsageError(f"unknown configuration fields: {', '.join(unknown)}")
        return self.json()


@dataclass
class CampaignConfig:
    """Parameters of one command run.

    Every field can come from the JSON document given with ``--config``
    and be overridden by the matching command-line flag.
    """

    width: float = 1.0
    horizon: float = 10.0
    dt: float = 1e-3
    seed: Optional[int] = None
    paths: int = 1
    replicates: int = 500
    n_blocks: int = 10_000
    blocks_per_path: int = 16
    calibration_blocks: int = 10_000
    penalties: List[str] = field(default_factory=lambda: ["quadratic"])
    tolerance: float = 1e-6
    energy_tolerance: float = 1e-8
    alpha: float = 0.01
    workers: int = 1
    output: str = "."
    input: Optional[str] = None
    boundary: str = "fixed"
    instances: int = 200
    max_grid: int = 64
    pair_law: str = "independent"
    tau_law: str = "exponential:1"
    x_law: str = "gaussian:5,1"
    rho: float = 0.0

    @classmethod
    def load(cls, file: PathLike) -> Self:
        """Read a configuration document.

        Raises:
            :class:`UsageError`: Unreadable file, malformed JSON or unknown fields.
        """
        try:
            with open(file, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exp:
            raise UsageError(f"can't read configuration {file}", exp) from None
        if not isinstance(data, dict):
            raise UsageError(f"configuration {file} is not a JSON object")
        return cls(**ConfigDocument(data).fields())

    def override(self, args: argparse.Namespace) -> Self:
        """Apply command-line flags that were given."""
        for name in (f.name for f in fields(self)):
            value = getattr(args, name, None)
            if value is not None:
                setattr(self, name, value)
        return self

    def require(self, name: str) -> Any:
        value = getattr(self, name)
        if value is None:
            raise UsageError(f"{name} is required in the configuration or flags")
        return value

    def penalty_specs(self) -> List[PenaltySpec]:
        names = [self.penalties] if isinstance(self.penalties, str) else self.penalties
        try:
            penalties = convert_penalties(names)
        except ValueError as exp:
            raise UsageError("bad penalty", exp) from None
        if not penalties:
            raise UsageError("at least one penalty is required")
        return penalties

    def validate(self) -> List[str]:
        """Check numeric fields.

        Returns:
            Warnings to record in the artifact metadata.
        Raises:
            :class:`UsageError`: Non-positive h, T, dt or counts.
        """
        for name in ("width", "horizon", "dt", "tolerance", "energy_tolerance"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not value > 0:
                raise UsageError(f"{name} must be a positive number, got {value!r}")
        for name in (
            "paths",
            "replicates",
            "n_blocks",
            "blocks_per_path",
            "calibration_blocks",
            "workers",
            "instances",
            "max_grid",
        ):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise UsageError(f"{name} must be a positive integer, got {value!r}")
        if not 0 < self.alpha < 1:
            raise UsageError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        warnings = []
        bound = (self.width / 4) ** 2 / 100
        if self.dt > bound:
            message = (
                f"dt={self.dt:g} exceeds (h/4)^2/100={bound:g}, "
                "h/4 crossings are poorly resolved"
            )
            logger.warning(message)
            warnings.append(message)
        return warnings

    def json(self) -> Dict[str, Any]:
        return asdict(self)
