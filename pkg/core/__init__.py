# Exact algebra, symmetry groups, classification and numerics
