import random
from fractions import Fraction

from bdcluster.linalg import Mat


def random_unimodular(n, rng, bound=3):
    """L*D*V with unitriangular integer L, V and det-1 rational diagonal."""
    L = [[Fraction(rng.randint(-bound, bound)) if i > j else Fraction(int(i == j))
          for j in range(n)] for i in range(n)]
    V = [[Fraction(rng.randint(-bound, bound)) if i < j else Fraction(int(i == j))
          for j in range(n)] for i in range(n)]
    d = [Fraction(rng.choice([x for x in range(-bound, bound + 1) if x]))
         for _ in range(n - 1)]
    p = Fraction(1)
    for x in d:
        p *= x
    d.append(1 / p)
    D = Mat([[d[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)])
    return Mat(L) * D * Mat(V)


def generic_unimodular(n, seed, predicate=None, tries=200):
    """First sample passing the predicate (defaults to 'all f used are defined')."""
    rng = random.Random(seed)
    for _ in range(tries):
        U = random_unimodular(n, rng)
        if predicate is None or predicate(U):
            return U
    raise RuntimeError("no generic sample found")
