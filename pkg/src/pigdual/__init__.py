"""Piggyback natural dualities over unbounded distributive lattices, computed
on finite algebras."""

from .finalg import (
    FinAlgebra, Hom, Signature, SubUniverse, free_algebra, hom_set, is_hom,
    maximal_subuniverses_within, one_element_subuniverses, power, product,
    subalgebra, subuniverse_generated, subuniverses,
)
from .priestley import Carrier, PointedPoset, double_dual_check, hu_dual, ku_dual, poset_order_iso
from .piggyback import (
    AlterEgo, PigRelation, add_trivial_sorts, build_alter_ego, check_pointed, check_sep,
    piggyback_relations,
)
from .natdual import delta, dual_D, duality_check, ed_algebra, lift
from .reconcile import build_Y, quotient_Z, reconcile_check

__version__ = "0.1.0"
