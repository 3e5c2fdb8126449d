"""Experiments package for PatchLearn: runner, reports, model files and plot data"""
