"""Environment variable access for nuresource.

Run configuration lives in config files; the environment may only redirect
the output directory (``NURESOURCE_OUTPUT_DIR``), which lets batch schedulers
send results to scratch storage without editing configs.
"""

import logging
import os
from pathlib import Path
from typing import Optional

logger = logging.getLogger(__name__)

ENV_PREFIX = "NURESOURCE_"
OUTPUT_DIR_VARIABLE = "OUTPUT_DIR"


def get_env(
    name: str,
    default: Optional[str] = None,
    required: bool = False,
    prefix: bool = True,
) -> Optional[str]:
    """Get an environment variable value.

    Args:
        name: Variable name (without prefix if prefix=True)
        default: Default value if not set
        required: If True, raise error if not set
        prefix: If True, prepend the NURESOURCE_ prefix

    Raises:
        ValueError: If required=True and variable is not set
    """
    full_name = f"{ENV_PREFIX}{name}" if prefix else name
    value = os.environ.get(full_name)

    if value is None or value == "":
        if required:
            raise ValueError(f"Required environment variable not set: {full_name}")
        return default

    return value


def output_dir_override() -> Optional[Path]:
    """Return the output directory forced through the environment, if any."""
    value = get_env(OUTPUT_DIR_VARIABLE)
    if value is None:
        return None
    logger.info("Output directory overridden by %s%s=%s", ENV_PREFIX, OUTPUT_DIR_VARIABLE, value)
    return Path(value)
