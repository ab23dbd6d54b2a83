"""Tests for the persistence package."""
