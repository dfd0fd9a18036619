"""Haar graphs and the ABCI problem."""
