"""Motivic Ext over sub-Hopf algebras of the Steenrod algebra.

Layers, bottom up:

* :mod:`steenext.f2` -- packed F2 vectors, matrices and incremental elimination
* :mod:`steenext.hopf` -- profile quotients of the motivic dual Steenrod algebra,
  Milnor products and coproducts
* :mod:`steenext.resolution` -- minimal free resolutions, trigraded Ext with the
  tau action, checkpoints; :mod:`steenext.cobar` is a brute-force cross-check
* :mod:`steenext.yoneda` -- products, Massey products, change-of-rings maps
* :mod:`steenext.naming`, :mod:`steenext.chart`, :mod:`steenext.verify`,
  :mod:`steenext.cli` -- names, charts, the verification harness and the CLI
"""

from .hopf import MotivicProfile, check_hopf_axioms, preset
from .resolution import (CheckpointError, ExtTable, Generator, RegionError, Resolution,
                         checkpoint_load, checkpoint_save, read_checkpoint, write_checkpoint)
from .cobar import CobarBlowup, cobar_ext_dims
from .yoneda import (ChainMap, Coset, ExtClass, Homotopy, MasseyUndefined, lift_chain_map,
                     mahowald, massey, null_homotopy, product, restriction)
from .naming import NamingTable, Workspace

__all__ = [
    "MotivicProfile", "check_hopf_axioms", "preset",
    "CheckpointError", "ExtTable", "Generator", "RegionError", "Resolution",
    "checkpoint_load", "checkpoint_save", "read_checkpoint", "write_checkpoint",
    "CobarBlowup", "cobar_ext_dims",
    "ChainMap", "Coset", "ExtClass", "Homotopy", "MasseyUndefined", "lift_chain_map",
    "mahowald", "massey", "null_homotopy", "product", "restriction",
    "NamingTable", "Workspace",
]
