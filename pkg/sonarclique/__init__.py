"""Outlier rejection for 2D forward-looking sonar correspondences via compatibility graphs."""
