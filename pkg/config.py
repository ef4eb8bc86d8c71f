"""
Configuration module for the char2-quartics verifier.
Loads environment variables and provides application settings.
"""

import os
from dotenv import load_dotenv

load_dotenv()


class Settings:
    """Application settings loaded from environment variables."""

    def __init__(self):
        # Parallelism
        self.workers = int(os.getenv("VERIFY_WORKERS", str(os.cpu_count() or 1)))

        # Search budgets
        self.search_budget_rank = int(os.getenv("SEARCH_BUDGET_RANK", "13"))
        self.scan_bound = int(os.getenv("SCAN_BOUND", str(2 ** 24)))
        self.max_seed_attempts = int(os.getenv("MAX_SEED_ATTEMPTS", "20000"))

        # Seeded random checks
        self.default_seed = int(os.getenv("DEFAULT_SEED", "7"))
        self.quartic_field_degree = int(os.getenv("QUARTIC_FIELD_DEGREE", "4"))
        self.random_model_count = int(os.getenv("RANDOM_MODEL_COUNT", "1000"))
        self.random_shape_count = int(os.getenv("RANDOM_SHAPE_COUNT", "200"))
        self.random_t23_count = int(os.getenv("RANDOM_T23_COUNT", "100"))

        # Output
        self.verbose = os.getenv("VERIFY_VERBOSE", "").lower() in ("1", "true", "yes")
        self.reports_dir = os.getenv("REPORTS_DIR", "reports")

        # Server Configuration
        self.host = os.getenv("HOST", "0.0.0.0")
        self.port = int(os.getenv("PORT", "8000"))


settings = Settings()
