import os
from pathlib import Path
from typing import Final, Optional

from dotenv import load_dotenv

load_dotenv()

# Directories
BASE_DIR: Final[Path] = Path(__file__).parent
LOG_FILE: Final[str] = os.getenv("ARBIGEOM_LOG_FILE", str(BASE_DIR / "arbigeom.log"))
RUNS_DB_FILE: Final[Path] = Path(os.getenv("ARBIGEOM_RUNS_DB", str(BASE_DIR / "runs.db")))
CASES_DIR: Final[Path] = Path(os.getenv("ARBIGEOM_CASES_DIR", str(BASE_DIR / "tests" / "cases")))

# Debug configuration
DEBUG: Final[bool] = os.getenv("DEBUG", "false").lower() == "true"

# Worker configuration (0 = one worker per CPU)
THREADS: Final[int] = int(os.getenv("ARBIGEOM_THREADS", "0"))

# Census configuration
CENSUS_MAX_M: Final[int] = int(os.getenv("ARBIGEOM_CENSUS_MAX_M", "16"))
EQUAL_ORTHANT_MAX_M: Final[int] = 6

# Simulation defaults
DEFAULT_SEED: Final[int] = int(os.getenv("ARBIGEOM_SEED", "20240601"))
DEFAULT_TRIALS: Final[int] = int(os.getenv("ARBIGEOM_TRIALS", "10000"))
MAX_RUN_HISTORY_ENTRIES: Final[int] = int(os.getenv("MAX_RUN_HISTORY_ENTRIES", "50"))


def resolve_thread_count(requested: Optional[int] = None) -> int:
    """Return the worker count to use; 0 or None means one per CPU."""
    count = THREADS if requested is None else requested
    if count <= 0:
        count = os.cpu_count() or 1
    return count
