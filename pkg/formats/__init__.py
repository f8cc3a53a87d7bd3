"""
Formats package for HOObs
Contains scenario JSON, DOT export and verdict reports
"""
