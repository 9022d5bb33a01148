"""Batch figure rendering for mocsim CSV/JSON sweep outputs."""

import matplotlib

matplotlib.use("Agg")

__version__ = "0.1.0"
