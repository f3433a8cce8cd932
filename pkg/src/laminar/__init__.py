"""Branched-surface combinatorics for Montesinos knots and tangles."""
