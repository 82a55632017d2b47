"""Test suite for Contact Center AI Orchestrator."""
