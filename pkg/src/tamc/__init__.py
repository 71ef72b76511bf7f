"""Bounded model checking of timed-automata networks against MITL properties.

The package compiles a network of timed automata (integer variables, channel /
broadcast / one-to-many synchronization) together with a negated MITL property
into a clocked linear-time formula, unrolls it to an SMT problem over lasso
interpretations, and certifies counterexample witnesses with an independent
dense-time oracle.
"""

__version__ = "0.1.0"
