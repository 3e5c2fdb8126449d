"""Core package for PatchLearn: configuration, errors and metrics"""
