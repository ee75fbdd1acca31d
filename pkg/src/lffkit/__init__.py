"""lffkit: determinized machines with side effects, and what they compute.

Finite automata, stack machines, weighted context-free grammars and
recursive program schemes, all driven through one deterministic behavior
interface (:mod:`lffkit.engine`).
"""

__version__ = "0.1.0"
