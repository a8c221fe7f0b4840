"""Ext-algebras, A-infinity structures and exact Borel data for directed
bound quiver algebras and their dual extensions."""

from .linalg import QQ, Matrix, PrimeField, Rationals, field_from_spec
from .presentations import (AlgebraPresentation, FDAlgebra, Path, Quiver,
                            Relation, build_algebra, compose_paths,
                            dual_extension, opposite, parse_presentation,
                            format_presentation)
from .modules import (Module, ModuleMap, canonical_module, hom_space,
                      induce_F, projective_cover, radical_top)
from .resolutions import (ProjResolution, induced_resolution, is_linear,
                          koszul_report, minimal_resolution)
from .ext import (ExtClassVec, ExtTable, ext_basis, ext_dim_formula_check,
                  extract_presentation, verify_dualext_iso)
from .merkulov import (AInfOps, build_end_dg, make_splitting,
                       shortcut_standard_mn, transfer, verify_stasheff)
from .an_family import (FamilyParams, OracleBasisLabel, build_family,
                        family_check, oracle_ext, oracle_ext_presentation,
                        oracle_m, oracle_resolution_term)
from .borel import (BoxPresentation, borel_quiver, borel_relations,
                    compute_box, decompose_all, decompose_induced_projective,
                    morita_multiplicities)

__version__ = "0.1.0"
