"""Exact computations on finite ultrametric spaces and their path extensions."""
from __future__ import annotations

from .embeddings import (
    PartialMap,
    check_extension_properties,
    check_prop4_i,
    check_prop4_ii,
    check_theorem6,
    extend_one_point,
    extend_to_total,
    find_isometric_embedding,
    is_local_spec_embedding,
    is_point_homogeneous,
)
from .generators import LevelSpec, max_space, omega_space, prop2_space, ultv_approx
from .monoid import (
    WeightedWord,
    WordHost,
    add_words,
    ball_sum,
    cyclic_op,
    embed_into_omega,
    meet_tree,
    path_sum,
    star_closure,
)
from .paths import (
    AlphaPath,
    BottomPath,
    SlimSet,
    enumerate_paths,
    path_ball,
    path_ball_isometry,
    path_distance,
    path_from_slim,
    path_infimum,
    path_leq,
    path_space,
    phi,
)
from .ramsey import Coloring, check_divisible, check_theorem4, subdominant_dstar
from .rational import INF
from .spaces import (
    Ball,
    FiniteUltraSpace,
    SpaceError,
    closed_ball,
    multispectrum,
    nerve,
    open_ball,
    sons,
    spectrum,
    validate_ultrametric,
)
from .trees import UNBOUNDED, TreeScheme, ValuedTree, scheme_materialize, space_to_tree, tree_to_space

__version__ = "0.1.0"
