def distinct(rnd, size):
    """Distinct weights from a hypothesis Random; ties are excluded by contract."""
    return [float(x) / 1000 for x in rnd.sample(range(1, 10**6), size)]
