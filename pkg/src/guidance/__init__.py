"""Direction commands for the runner."""

from .commands import DirectionCommand, SectorConfig, command_from_yaw, emit, parse_token

__all__ = ['DirectionCommand', 'SectorConfig', 'command_from_yaw', 'emit', 'parse_token']
