"""Unit tests for the duality simulator."""
