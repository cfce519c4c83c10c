from typing import Any, Mapping, Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

__version__ = "1.0.0"


def create_config(config_path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None):
    """Create the run configuration: defaults, then .env/environment, then JSON file, then overrides"""
    from gridcast.utils.config_utils import build_config

    return build_config(config_path=config_path, overrides=overrides)
