"""Tests for the mrsne package."""
