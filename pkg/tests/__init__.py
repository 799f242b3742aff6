"""
Test package for skewmix.

This package contains the cross-module acceptance checks, the CLI
integration tests and the performance benchmarks.
"""
