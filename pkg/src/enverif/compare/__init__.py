"""Sign decisions for differences of bound functions."""
from .partition import (DomainExhausted, Piece, Rel, SignPartition,
                        compare_fns, safe_adjust, sign_partition)
from .roots import (EVERYWHERE_ZERO, Root, UnsupportedComparison, find_roots,
                    polynomial_roots, scan_roots)

__all__ = ["DomainExhausted", "Piece", "Rel", "SignPartition", "compare_fns",
           "safe_adjust", "sign_partition", "EVERYWHERE_ZERO", "Root",
           "UnsupportedComparison", "find_roots", "polynomial_roots", "scan_roots"]
