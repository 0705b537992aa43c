"""Independent brute-force references.  Nothing here imports collatz_lab."""

from fractions import Fraction


def collatz(n):
    return 3 * n + 1 if n % 2 else n // 2


def naive_trajectory(n, accelerated=False):
    out = [n]
    while n != 1:
        if n % 2:
            n = (3 * n + 1) // 2 if accelerated else 3 * n + 1
        else:
            n //= 2
        out.append(n)
    return out


def naive_height(n):
    return len(naive_trajectory(n)) - 1


def naive_merge(n):
    """Aligned C-orbits of n, n+1 until they first agree (same height assumed)."""
    a, b = [n], [n + 1]
    while a[-1] != b[-1]:
        a.append(collatz(a[-1]))
        b.append(collatz(b[-1]))
    return a, b


def apply_t_vector(bits, x):
    """T applied as prescribed by ``bits``, exactly over the rationals."""
    x = Fraction(x)
    for b in bits:
        x = (3 * x + 1) / 2 if b else x / 2
    return x


def apply_c_vector(bits, x):
    x = Fraction(x)
    for b in bits:
        x = 3 * x + 1 if b else x / 2
    return x


def brute_census(start, stop):
    """(same-height pairs, counterexamples list) by plain iteration."""
    same, cx = 0, []
    for n in range(start, stop):
        if naive_height(n) != naive_height(n + 1):
            continue
        same += 1
        a, b = naive_merge(n)
        k = len(a) - 1
        x, y = a[k - 3], b[k - 3]
        if not ((x % 8 == 4 and y == x + 1) or (y % 8 == 4 and x == y + 1)):
            cx.append(n)
    return same, cx


def scaled_t_values(bits, xs):
    """``2**len(bits) * T_bits(x)`` for a numpy array of x, one step at a time."""
    num = xs.copy()
    for t, bit in enumerate(bits):
        if bit:
            num = 3 * num + (1 << t)
    return num
