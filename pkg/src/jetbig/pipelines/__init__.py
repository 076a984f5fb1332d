"""End-to-end computations on X_3 and X_4: leading terms, h^0 bounds, thresholds."""
