"""Horizon-free online learning: minimax values, pretend-prior learners, game arena."""

__version__ = "0.1.0"
