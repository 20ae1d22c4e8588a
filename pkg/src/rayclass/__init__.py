"""Ray class groups of real quadratic and prime cyclotomic fields, with a brute-force oracle."""

from .abgroup import AbGroup, IntMatrix, group_from_relations, quotient_by_subgroup, smith_normal_form
from .cycray import ray_order_exponent, ray_structure
from .quadray import inert_ray_ratio, split_abelian_bound, split_ray_ratio

__all__ = [
    "AbGroup",
    "IntMatrix",
    "group_from_relations",
    "quotient_by_subgroup",
    "smith_normal_form",
    "ray_order_exponent",
    "ray_structure",
    "split_ray_ratio",
    "inert_ray_ratio",
    "split_abelian_bound",
]

__version__ = "0.1.0"
