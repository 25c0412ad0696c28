import os

TOLERANCE = 1e-12
# looser bound applied to user-supplied coefficients before renormalization
PARSE_TOLERANCE = 1e-9

MAX_PHOTON_COUNT = int(os.environ.get("GHZECP_MAX_PHOTONS", 20))
DEBUG = os.environ.get("GHZECP_DEBUG", "0") == "1"

DEFAULT_ROUNDS = 6
DEFAULT_ROUND_LIST = [1, 2, 3, 6]
DEFAULT_E_GRID = [round(0.01 * i, 2) for i in range(1, 100)]

H, V = "H", "V"
POLARIZATIONS = [H, V]

__all__ = [
    "TOLERANCE",
    "PARSE_TOLERANCE",
    "MAX_PHOTON_COUNT",
    "DEBUG",
    "DEFAULT_ROUNDS",
    "DEFAULT_ROUND_LIST",
    "DEFAULT_E_GRID",
    "H",
    "V",
    "POLARIZATIONS",
]
