"""BraneGauge Tests"""
