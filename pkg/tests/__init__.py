"""Tests for weakloc."""
