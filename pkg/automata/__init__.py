"""
Automata package for HOObs
Contains the labeled automaton model, estimation primitives and generators
"""
