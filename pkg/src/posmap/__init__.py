"""Positivity analysis for the unital qudit map families

    Phi_{alpha,beta} = (1 - alpha - beta) id + alpha tau_0 + beta Delta
    Lambda_{mu,nu}   = (1 - mu - nu) T + mu tau_0 + nu Delta

with exact rational region geometry, Choi-matrix certificates, witness
constructions and a see-saw search over Schmidt-rank-bounded vectors.
"""

from .maps import MapCombination, lam, phi
from .regions import ParamRegion, contains, kpos_region, region
from .certify import CertVerdict, Status, seesaw_min_blockform
from .choi import build_choi, boundary_decomposition

__version__ = "0.1.0"
