"""Command-line entry point of the toolkit.

Every command writes CSV/JSON artifacts with a ``.meta.json`` sidecar and
exits with 0 on pass, 1 on a failed check and 2 on a usage error.
"""
from .commands import (
    CLT_VARIANCE_BAND,
    COMMANDS,
    Artifacts,
    clt_checks,
    estimate_checks,
    pair_law,
    random_instance,
)
from .config import CampaignConfig, ConfigDocument, UsageError
from .main import EXIT_FAILED, EXIT_PASSED, EXIT_USAGE, build_parser, main
