"""Property-based tests - testing mathematical properties and invariants."""
