"""
Lattice Scope - Runtime Configuration
Work budgets, output formatting and logging settings.

Every value can be overridden through an environment variable so batch
jobs (see start_convergence_report.sh) can tune caps without code edits.
"""

import os


def _env_int(name, default):
    """Read an integer setting from the environment"""
    raw = os.getenv(name, '')
    if not raw:
        return default
    return int(float(raw))


# Scan / search caps
SCAN_CONFIG = {
    'work_budget': _env_int('LATTICE_SCOPE_BUDGET', 10**9),  # tuple-gcd evaluations
    'sieve_cap': _env_int('LATTICE_SCOPE_SIEVE_CAP', 5 * 10**7),
    'hidden_search_limit': _env_int('LATTICE_SCOPE_HIDDEN_SEARCH_LIMIT', 10**5),
    'hidden_search_max_k': 5,
    'hidden_witness_cap': _env_int('LATTICE_SCOPE_HIDDEN_WITNESS_CAP', 40),
    'exact_cover_cap': _env_int('LATTICE_SCOPE_EXACT_COVER_CAP', 8),
    'exceptional_scan_points': _env_int('LATTICE_SCOPE_EXCEPTIONAL_POINTS', 10**8),
    'row_block_cells': _env_int('LATTICE_SCOPE_ROW_BLOCK_CELLS', 2**20),
    'blind_spot_max_points': 12,
}

# Output formatting
OUTPUT_CONFIG = {
    'float_digits': 9,
    'reports_dir': os.getenv('LATTICE_SCOPE_REPORTS_DIR', 'reports'),
    'plan_member_limit': 10**4,  # larger E_n(g) sets serialize as count + digest
}

# Logging
LOGGING_CONFIG = {
    'level': os.getenv('LATTICE_SCOPE_LOG_LEVEL', 'INFO'),
    'file': os.getenv('LATTICE_SCOPE_LOG_FILE', ''),
    'format': '%(asctime)s - %(levelname)s - %(message)s',
}
