"""Tests for the cvqfl package."""
