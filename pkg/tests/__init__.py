"""Tests for speechprep."""
