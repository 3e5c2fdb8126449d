"""Patch learning engine for PatchLearn"""
