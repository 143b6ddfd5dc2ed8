"""Geometry of two-qubit pure states through the quaternionic Hopf fibration."""
