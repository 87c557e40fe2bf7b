"""Tests for g2-ein-geometry."""
