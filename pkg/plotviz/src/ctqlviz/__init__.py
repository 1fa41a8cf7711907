"""Figure rendering for ctql trajectory and metrics files."""

from .data import MetricsPoint, TrajectoryPoint, read_metrics, read_trajectory
from .figures import FigureSpec, plot_radial, plot_training_curve

__version__ = "0.1.0"
