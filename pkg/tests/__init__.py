"""Tests for the PatchLearn package"""
