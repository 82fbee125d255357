# Independent brute force: does the partition lattice of a 4-element set satisfy
# beta & (gamma o delta o gamma) <= (beta & gamma) + delta for delta <= beta,
# and the modular law?
import itertools

def partitions(s):
    if not s:
        yield []
        return
    first, rest = s[0], s[1:]
    for p in partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i+1:]
        yield [[first]] + p

def rel(p):
    return {(a, b) for blk in p for a in blk for b in blk}

def comp(r, s):
    return {(a, c) for (a, b) in r for (b2, c) in s if b == b2}

def tc(r):
    r = set(r)
    while True:
        n = r | comp(r, r)
        if n == r:
            return r
        r = n

n = 4
ps = [rel(p) for p in partitions(list(range(n)))]
print("partitions", len(ps))
hyp_fail = mod_fail = 0
example = None
for b in ps:
    for g in ps:
        for d in ps:
            if not d <= b:
                continue
            lhs = b & comp(comp(g, d), g)
            rhs = tc((b & g) | d)
            if not lhs <= rhs:
                hyp_fail += 1
                example = example or (b, g, d, lhs - rhs)
            if b & tc(g | d) != rhs:
                mod_fail += 1
print("hypothesis violations", hyp_fail, "modularity violations", mod_fail)
print("example", example)
