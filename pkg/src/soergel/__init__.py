"""Exact computations in the diagrammatic Hecke category."""
