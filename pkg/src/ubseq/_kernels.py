"""Sequential inner loops compiled with numba."""

import numpy as np
from numba import njit


@njit(cache=True)
def linear_sieve(max_n, prime_slots):
    """One pass of the smallest-prime-factor linear sieve.

    Every composite n = p * i is reached exactly once, with p = spf(n), so
    Omega, omega and mu follow from the values at i.
    """
    spf = np.zeros(max_n + 1, dtype=np.uint32)
    primes = np.empty(prime_slots, dtype=np.int64)
    big = np.zeros(max_n + 1, dtype=np.uint8)
    small = np.zeros(max_n + 1, dtype=np.uint8)
    mu = np.zeros(max_n + 1, dtype=np.int8)
    if max_n >= 1:
        mu[1] = 1
    count = 0
    for i in range(2, max_n + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[count] = i
            count += 1
            big[i] = 1
            small[i] = 1
            mu[i] = -1
        si = np.int64(spf[i])
        for j in range(count):
            p = primes[j]
            if p > si:
                break
            n = p * i
            if n > max_n:
                break
            spf[n] = p
            big[n] = big[i] + 1
            if p == si:
                small[n] = small[i]
                mu[n] = 0
            else:
                small[n] = small[i] + 1
                mu[n] = -mu[i]
    return big, small, mu, count


@njit(cache=True)
def kahan_sum(x):
    s = 0.0
    c = 0.0
    for i in range(x.shape[0]):
        y = x[i] - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


@njit(cache=True)
def fnv1a64(data):
    h = np.uint64(0xCBF29CE484222325)
    prime = np.uint64(0x100000001B3)
    for i in range(data.shape[0]):
        h = (h ^ np.uint64(data[i])) * prime
    return h
