"""Tests for the chaincore package."""
