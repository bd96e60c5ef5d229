"""
BayesWalk - Sequential Graph Traversal Under Gaussian-Process Beliefs
---------------------------------------------------------------------

A traveler walks a graph whose node rewards and edge costs are unknown, learning
them with Gaussian-process beliefs as it goes. Includes the decision policies, an
exact clairvoyant solver, and a seeded experiment bench with a CLI and Flask API.
"""

__version__ = '0.1.0'
