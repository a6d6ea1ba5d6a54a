"""Randomized GREEDY for independent sets and matchings on bounded-degree and high-girth regular graphs."""

__version__ = "0.1.0"
