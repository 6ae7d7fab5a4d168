"""Unit tests for the cvqfl package."""
