"""Machine checks for crank generating functions of t-core partitions.

The package builds the two-variable products over Z[zeta]/Phi_l, reduces them
modulo Phi_3, and certifies the resulting eta-quotient vanishing claims with a
specialised form of Radu's lemma.  Brute-force partition enumeration serves as
an independent oracle throughout.
"""

from qcrank.cyclotomic import CycElem, ExactRational, LaurentPoly, cyc_is_zero, cyc_mul, cyc_project
from qcrank.qseries import EtaQuotientSpec, QSeries, eta_product, slice_progression, twisted_pair_product

__version__ = "0.1.0"

__all__ = [
    "CycElem",
    "EtaQuotientSpec",
    "ExactRational",
    "LaurentPoly",
    "QSeries",
    "cyc_is_zero",
    "cyc_mul",
    "cyc_project",
    "eta_product",
    "slice_progression",
    "twisted_pair_product",
    "__version__",
]
