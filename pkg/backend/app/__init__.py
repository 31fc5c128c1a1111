"""Tropical cycles, their currents, intersections and amoebas."""
