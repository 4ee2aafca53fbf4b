"""quadkit: quad-dominant mesh processing.

Subpackages cover the full deterministic pipeline: polygon mesh core and OBJ
IO (:mod:`quadkit.mesh`), the geometric verification battery
(:mod:`quadkit.verify`), exact maximum-weight matching
(:mod:`quadkit.matching`), triangle-to-quad merging (:mod:`quadkit.tri2quad`),
anchor tokenization (:mod:`quadkit.tokenizer`), contrastive link-loss
numerics (:mod:`quadkit.linkloss`), centroid-conditioned face assembly
(:mod:`quadkit.assembly`), evaluation metrics (:mod:`quadkit.metrics`), and
Goldberg polyhedron generation (:mod:`quadkit.goldberg`).
"""

from .mesh import PolyMesh, load_obj, save_obj

__version__ = "0.1.0"

__all__ = ["PolyMesh", "load_obj", "save_obj", "__version__"]
