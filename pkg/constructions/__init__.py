"""
Constructions package for HOObs
Contains observer, detector, concurrent composition and strong-opacity transforms
"""
