from dotenv import load_dotenv
import os

# Load environment variables
load_dotenv()

TOOL_NAME = "tss-engine"
TOOL_VERSION = "1.0.0"

# Largest n for which S_n is materialized by enumerate_sym (8! = 40320)
SYM_CAP = int(os.getenv("TSS_SYM_CAP", "8"))

# Closure of user generators stops here
ELEMENT_CAP = int(os.getenv("TSS_ELEMENT_CAP", "100000"))

# Full Cayley tables are only built for groups up to this order
TABLE_CAP = int(os.getenv("TSS_TABLE_CAP", "5040"))

# Element ids kept in cached conjugation columns, across all columns of one group
CONJ_CACHE_IDS = int(os.getenv("TSS_CONJ_CACHE_IDS", str(2**25)))

# Image-table entries (order x degree) a group may occupy
ENTRY_CAP = int(os.getenv("TSS_ENTRY_CAP", "20000000"))

BUDGET_SECONDS = float(os.getenv("TSS_BUDGET_SECONDS", "1800"))

DEFAULT_JOBS = int(os.getenv("TSS_JOBS", "1"))

DB_PATH = os.getenv("TSS_DB_PATH", "./tss_cache.db")

LOG_LEVEL = os.getenv("TSS_LOG_LEVEL", "INFO").upper()
