"""Unit tests for the mai package."""
