"""Tests for the eval package."""
