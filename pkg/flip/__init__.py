"""FLIP local search and exhaustive local-optimum enumeration."""
