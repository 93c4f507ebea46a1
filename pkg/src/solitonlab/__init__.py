"""solitonlab: exact soliton constructions with built-in numerical verification.

Subpackages are organized by governing system:

- algebra: Cayley-algebra arithmetic (complex through octonion)
- exppoly / elliptic / numerics / fields: the exact-calculus and oracle kernel
- kdv, mc_kdv, mkdv_sg, hirota, nonlocal_hirota, spin: classical builders
- qdarboux: time-dependent Darboux ladders for quantum systems
- cli: command-line front end
"""

__version__ = "0.1.0"
