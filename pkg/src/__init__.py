# Residuum: exact verification of k-differentials on singular curves
