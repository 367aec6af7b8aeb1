"""epcvis: elliptic paired coordinates engine and dominance-rule workbench."""

from .geometry import (
    CoordinateAnchor,
    EllipseSpec,
    EPCGraph,
    GeometryError,
    InversionError,
    LayoutConfig,
    LayoutError,
    DomainError,
    SideEllipse,
    anchor_value,
    embed,
    embed_batch,
    intersect_equal_ellipses,
    invert,
    invert_batch,
    points_on_horizontal_line,
    side_ellipse_for_anchor,
)

__version__ = "0.1.0"

__all__ = [
    "CoordinateAnchor",
    "EllipseSpec",
    "EPCGraph",
    "GeometryError",
    "InversionError",
    "LayoutConfig",
    "LayoutError",
    "DomainError",
    "SideEllipse",
    "anchor_value",
    "embed",
    "embed_batch",
    "intersect_equal_ellipses",
    "invert",
    "invert_batch",
    "points_on_horizontal_line",
    "side_ellipse_for_anchor",
    "__version__",
]
