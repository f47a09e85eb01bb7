"""Test package for ekldeg."""
