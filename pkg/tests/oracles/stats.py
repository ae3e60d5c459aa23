"""Textbook statistics oracles written without numpy vector tricks."""
import math


def ranks(values):
    """Average ranks by counting: 1 + #smaller + (#equal - 1) / 2."""
    out = []
    for x in values:
        smaller = sum(1 for y in values if y < x)
        equal = sum(1 for y in values if y == x)
        out.append(1 + smaller + (equal - 1) / 2)
    return out


def pearson(x, y):
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def spearman_rho(x, y):
    return pearson(ranks(x), ranks(y))


def critical_rho_t(n, alpha):
    """Invert the t-approximation: rho* = t* / sqrt(n - 2 + t*^2)."""
    from scipy.stats import t

    tc = t.ppf(1 - alpha / 2, n - 2)
    return tc / math.sqrt(n - 2 + tc * tc)


def moments(values):
    """Mean, sample sd, and bias-corrected G1/G2 via the g1/g2 route:
    G1 = sqrt(n(n-1))/(n-2) g1, G2 = (n-1)/((n-2)(n-3)) ((n+1) g2 + 6)."""
    n = len(values)
    mean = math.fsum(values) / n
    m2 = math.fsum((x - mean) ** 2 for x in values) / n
    m3 = math.fsum((x - mean) ** 3 for x in values) / n
    m4 = math.fsum((x - mean) ** 4 for x in values) / n
    sd = math.sqrt(m2 * n / (n - 1))
    g1 = m3 / m2 ** 1.5
    g2 = m4 / m2 ** 2 - 3
    G1 = math.sqrt(n * (n - 1)) / (n - 2) * g1
    G2 = (n - 1) / ((n - 2) * (n - 3)) * ((n + 1) * g2 + 6)
    return mean, sd, G1, G2
