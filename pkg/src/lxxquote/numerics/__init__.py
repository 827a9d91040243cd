"""Matrix construction, clustering and PCA."""

from .matrix import (
    LOG_OFFSET_MODES,
    LogMatrix,
    ProportionMatrix,
    axis_points,
    euclidean_distances,
    log_transform,
    matrix_csv,
    parse_matrix_csv,
    proportion_matrix,
    read_matrix_csv,
    row_distance_matrix,
)
from .pca import PcaProjection, jacobi_eigh, loading_projection, pca_project
from .ward import Merge, WardResult, cut, dendrogram_csv, match_labels, ward_cluster, ward_linkage
