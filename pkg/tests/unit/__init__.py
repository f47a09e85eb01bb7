"""Unit tests - isolated, fast tests of one module."""
