"""Color representations of polytopes, stars and triadic fractals."""
