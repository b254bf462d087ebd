"""Middle Laplace transforms and middle convolution for Pfaffian systems, in exact arithmetic."""
