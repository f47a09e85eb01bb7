"""Contract tests - JSON output format validation."""
