"""
Configuration package for HOObs
"""
