"""CSS codes assembled from several classical codes by the block/FLIP recipe."""

__version__ = "0.1.0"
