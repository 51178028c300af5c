"""Bundled calibration snapshots and sample circuits"""
