"""Python bindings for the steklov library."""

from ._core import (
    Annulus,
    CircleFactor,
    Disk,
    Ellipse,
    MetricChart,
    ListedFactor,
    Parity,
    PerturbedDisk,
    Polygon,
    Rectangle,
    SampledPath,
    SteklovError,
    TorusFactor,
    TraceReport,
    build_mesh,
    chart_by_name,
    critical_length,
    develop,
    holonomy_path_independence,
    horizontal_lift,
    jacobi_transport,
    orthonormal_frame,
    parallel_transport,
    product_steklov_spectrum,
    rigidity_condition,
    sigma_mu_disk,
    sigma_mu_disk_series,
    sigma_mu_interval,
    sigma_of_mu,
    steklov_spectrum,
    sweep,
    trace_report,
    trace_tolerance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
