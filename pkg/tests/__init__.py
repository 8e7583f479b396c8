"""
Track Guide Test Suite
======================

This package contains tests for the track-guide library and simulator.

Test Modules:
- test_spline.py, test_curve.py: Natural cubic splines and arc-length curves
- test_track.py: Track layout, lane geometry and CSV export
- test_perception.py: Simulated observations and the lane midline reference
- test_lattice.py, test_costs.py, test_planner.py: Lattice, cost terms and the DP planner
- test_guidance.py: Yaw to command mapping and command tokens
- test_runner.py, test_episode.py, test_metrics.py: Runner model, closed-loop episodes, metrics
- test_scenario.py, test_export.py, test_main.py: Scenario files, output files and the CLI

Running Tests:
    # Run all tests
    python -m pytest tests/

    # Run with verbose output
    python -m pytest tests/ -v

    # Run a specific test file
    python -m pytest tests/test_planner.py

    # Run a specific test class
    python -m pytest tests/test_planner.py::TestPlanOracle

    # Skip the slow closed-loop episodes
    python -m pytest tests/ --deselect tests/test_episode.py

    # Stop on first failure
    python -m pytest tests/ -x

    # Run tests matching a pattern
    python -m pytest tests/ -k "lattice"
"""
