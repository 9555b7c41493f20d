"""Render figures and an index page from wiserx experiment CSV output.

Consumes only the experiment output files (summary CSV, per-tick series
CSV, failure map text dumps); never imports the simulator.
"""

from .render import EXPERIMENTS, SchemaMismatch, render_report

__version__ = "0.1.0"

__all__ = ["EXPERIMENTS", "SchemaMismatch", "render_report", "__version__"]
