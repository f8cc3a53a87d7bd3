"""
CLI package for HOObs
Contains the batch command implementations
"""
