"""Figure renderers for the dpr-bounds sweep CSVs."""

from .csvdata import SweepData, load_csv
from .render import FIGURE_IDS, FigureSpec, RenderInfo, render

__version__ = "0.1.0"
