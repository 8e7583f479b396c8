"""Athletics track geometry: layout, lanes and CSV export."""

from .layout import TrackLayout, TrackModel, generate_track, lane_at, layout_pose
from .export import read_track_csv, track_summary, write_track_csv

__all__ = [
    'TrackLayout', 'TrackModel', 'generate_track', 'lane_at', 'layout_pose',
    'read_track_csv', 'track_summary', 'write_track_csv',
]
