"""
Galois-group descriptors at SG points.
"""

from typing import Optional, Sequence

from app.services.models import GroupDescriptor, SGWitness


def group_descriptor(
    h_order: int,
    components: int,
    witnesses: Optional[Sequence[SGWitness]] = None,
    cyclic: bool = True,
) -> GroupDescriptor:
    """
    Both admissible descriptions of the Galois group at an SG point whose
    per-component group H has order `h_order`: H x Z/n always, and Z/(|H|n)
    when H is cyclic. A single component gives H itself.
    """
    h, n = h_order, components
    if n == 1:
        return GroupDescriptor(h, 1, (f"Z/{h}",), "the Galois group of the single projection")
    descriptors = [f"Z/{n}"] if h == 1 else [f"Z/{h} x Z/{n}"]
    if cyclic and h > 1:
        descriptors.append(f"Z/{h * n}")
    cycle = "the witnesses" if witnesses else "isomorphisms"
    recipe = (
        f"cycle the {n} components through {cycle} phi(i,i+1) compatible with the projection; "
        f"for Z/{h * n} compose the cycle with a generator of H on one component"
    )
    return GroupDescriptor(h, n, tuple(descriptors), recipe)
