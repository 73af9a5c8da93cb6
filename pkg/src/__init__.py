"""Primal-dual (Bregman-)proximal splitting for saddle-point problems."""
