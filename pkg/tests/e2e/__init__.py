"""End-to-end tests - complete workflow validation."""
