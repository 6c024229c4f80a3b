"""Statics toolkit for a single-finger gripper with a folding mechanism."""
__version__ = "0.1.0"
