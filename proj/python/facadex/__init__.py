"""SPARQL over CSV, JSON, XML, YAML, Markdown and other formats."""

from ._core import FacadexError, ask, isomorphic, query, select, triplify, triplify_location

__all__ = ["FacadexError", "ask", "isomorphic", "query", "select", "triplify", "triplify_location"]
__version__ = "0.1.0"
