"""
Predicates package for HOObs
Contains the leveled predicate language, its parser and the named properties
"""
