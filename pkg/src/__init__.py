"""Renyi entropy of the XY spin chain via elliptic, theta and modular functions."""
