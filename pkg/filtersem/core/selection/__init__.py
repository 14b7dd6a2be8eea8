"""Filter-combination search: genetic algorithm and baselines."""
