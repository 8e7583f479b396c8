"""Track geometry export as CSV (lane, side, x, y)."""

import csv
from pathlib import Path
from typing import Any, Dict, Tuple

import numpy as np

from track.layout import TrackModel

CSV_COLUMNS = ('lane', 'side', 'x', 'y')
SIDES = ('center', 'left', 'right')


def track_rows(track: TrackModel):
    """Yield (lane, side, x, y) rows for every lane line."""
    for lane in range(1, track.layout.num_lanes + 1):
        lines = {
            'center': track.centerline_points[lane - 1],
            'left': track.left_boundary(lane),
            'right': track.right_boundary(lane),
        }
        for side in SIDES:
            for x, y in lines[side]:
                yield lane, side, float(x), float(y)


def write_track_csv(track: TrackModel, path: Path) -> None:
    """Write every centerline and boundary polyline to a CSV file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(CSV_COLUMNS)
        for lane, side, x, y in track_rows(track):
            writer.writerow([lane, side, repr(x), repr(y)])


def read_track_csv(path: Path) -> Dict[Tuple[int, str], np.ndarray]:
    """Read a track CSV back into {(lane, side): points}."""
    lines: Dict[Tuple[int, str], list] = {}
    with open(path, 'r', newline='') as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected track CSV header: {reader.fieldnames}")
        for row in reader:
            key = (int(row['lane']), row['side'])
            lines.setdefault(key, []).append((float(row['x']), float(row['y'])))
    return {key: np.asarray(points) for key, points in lines.items()}


def track_summary(track: TrackModel) -> Dict[str, Any]:
    """Layout plus the numerically integrated centerline length per lane."""
    layout = track.layout
    return {
        'straight_length_m': layout.straight_length,
        'inner_radius_m': layout.inner_radius,
        'lane_width_m': layout.lane_width,
        'num_lanes': layout.num_lanes,
        'lanes': [
            {
                'lane': lane,
                'centerline_length_m': round(track.centerline(lane).total_length, 6),
            }
            for lane in range(1, layout.num_lanes + 1)
        ],
    }
