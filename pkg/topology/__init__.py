"""surfacekit topology library: exhaustions, curves, twists, chains and homomorphism gates."""
