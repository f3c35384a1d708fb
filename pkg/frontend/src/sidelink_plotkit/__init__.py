"""Batch plotting for sidelink-sim result CSVs."""
from .render import CSV_HEADER, CsvFormatError, load_rows, render

__version__ = "0.1.0"

__all__ = ["CSV_HEADER", "CsvFormatError", "load_rows", "render", "__version__"]
