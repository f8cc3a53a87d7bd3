"""
Verification package for HOObs
Contains the observer-walking verifier, the brute-force oracle and the verification engine
"""
