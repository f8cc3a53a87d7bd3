"""
High-order package for HOObs
Contains nested states and the order-n observer pipeline
"""
