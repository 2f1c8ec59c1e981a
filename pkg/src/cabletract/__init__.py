"""Feasibility-analysis engine for a cable-driven agricultural field robot.

One atomic scenario evaluator (`core.run_single`) plus physics, soil-draft,
climate/energy, field-geometry, compaction, economics, uncertainty, variant
and operating-envelope layers, all regenerable from a single CLI into CSV
tables.
"""

__version__ = "0.1.0"

DEFAULT_SEED = 29
