"""Tests for nuresource."""
