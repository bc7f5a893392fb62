"""Figure rendering for the ryddrive CSV outputs."""

__version__ = "0.1.0"

from .recipes import FIGURE_IDS, FIGURE_INPUTS, FigureRecipe
from .render import render
from .schema import SCHEMAS, SchemaError, load_table
