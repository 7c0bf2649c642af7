"""Tests for cyclefree."""
