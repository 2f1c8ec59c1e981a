"""Figure rendering for cabletract figdata CSV trees.

Read-only over the figdata contract: every number plotted originates in the
analysis pipeline's CSVs; this package only arranges axes.
"""

__version__ = "0.1.0"
