"""Orders, gradings and group ring decompositions."""
