"""Command-line runner, verification suites and serialization."""
