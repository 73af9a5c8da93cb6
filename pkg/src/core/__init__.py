"""Numerical core: block vectors, operators, proximal maps and Bregman divergences."""
