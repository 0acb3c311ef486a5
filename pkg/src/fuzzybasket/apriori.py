"""Level-wise frequent itemset mining and association rule generation.

Supports are kept as exact transaction counts with the database size as the
divisor, so threshold comparisons (count/n >= minsup) are done in rational
arithmetic and never misclassify boundary cases like 3/5 vs 0.6.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations


class MiningError(ValueError):
    pass


@dataclass(frozen=True)
class Itemset:
    items: tuple   # sorted item labels
    count: int
    n: int

    @property
    def support(self):
        return self.count / self.n

    def __len__(self):
        return len(self.items)


@dataclass(frozen=True)
class AssociationRule:
    antecedent: tuple
    consequent: tuple
    count: int       # transactions containing antecedent ∪ consequent
    ante_count: int  # transactions containing the antecedent
    n: int

    def __post_init__(self):
        if not self.antecedent or not self.consequent:
            raise MiningError("rule sides must be non-empty")
        if set(self.antecedent) & set(self.consequent):
            raise MiningError("rule sides must be disjoint")

    @property
    def support(self):
        return self.count / self.n

    @property
    def confidence(self):
        return self.count / self.ante_count

    def __str__(self):
        return (f"{{{', '.join(self.antecedent)}}} => "
                f"{{{', '.join(self.consequent)}}} "
                f"(support={self.support:.3f}, confidence={self.confidence:.3f})")


def _as_itemsets(db):
    if hasattr(db, "itemsets"):
        db = db.itemsets()
    return [frozenset(t) for t in db]


def _check_threshold(name, x):
    if not 0 < x <= 1:
        raise MiningError(f"{name} must be in (0, 1], got {x}")
    # thresholds are decimal text at the source (config/CLI); going through
    # str() recovers the intended decimal, so 0.4 means 2/5, not the nearest
    # binary double (which is slightly larger and would drop exact-boundary
    # itemsets)
    return Fraction(str(x))


def frequent_itemsets(db, minsup, max_size=None):
    """All itemsets with support >= minsup, by level-wise candidate generation.

    Candidates of size k are built by joining frequent (k-1)-itemsets sharing
    a (k-2)-prefix, then pruned unless every (k-1)-subset is frequent
    (downward closure). One transaction scan counts each level.
    """
    minsup = _check_threshold("minsup", minsup)
    transactions = _as_itemsets(db)
    if not transactions:
        raise MiningError("empty transaction database")
    n = len(transactions)

    counts = {}
    for t in transactions:
        for item in t:
            key = frozenset([item])
            counts[key] = counts.get(key, 0) + 1
    level = {s: c for s, c in counts.items() if Fraction(c, n) >= minsup}
    all_frequent = dict(level)

    k = 2
    while level and (max_size is None or k <= max_size):
        prev = sorted(tuple(sorted(s)) for s in level)
        candidates = set()
        for a, b in combinations(prev, 2):
            if a[:-1] == b[:-1]:  # shared (k-2)-prefix join
                cand = frozenset(a) | frozenset(b)
                if all(frozenset(sub) in level
                       for sub in combinations(sorted(cand), k - 1)):
                    candidates.add(cand)
        counts = {c: 0 for c in candidates}
        for t in transactions:
            for c in candidates:
                if c <= t:
                    counts[c] += 1
        level = {s: c for s, c in counts.items() if Fraction(c, n) >= minsup}
        all_frequent.update(level)
        k += 1

    out = [Itemset(tuple(sorted(s)), c, n) for s, c in all_frequent.items()]
    out.sort(key=lambda it: (len(it.items), it.items))
    return out


def generate_rules(frequent, minconf):
    """All rules X => Z\\X over frequent Z with confidence >= minconf.

    Output order is deterministic: confidence desc, support desc, then
    lexicographic antecedent and consequent.
    """
    minconf = _check_threshold("minconf", minconf)
    by_set = {frozenset(it.items): it for it in frequent}
    rules = []
    for it in frequent:
        if len(it.items) < 2:
            continue
        for r in range(1, len(it.items)):
            for ante in combinations(it.items, r):
                ante_it = by_set.get(frozenset(ante))
                if ante_it is None:
                    # can't happen for a downward-closed frequent list
                    continue
                if Fraction(it.count, ante_it.count) >= minconf:
                    cons = tuple(sorted(set(it.items) - set(ante)))
                    rules.append(AssociationRule(
                        tuple(sorted(ante)), cons, it.count, ante_it.count, it.n))
    rules.sort(key=lambda r: (-r.confidence, -r.support, r.antecedent, r.consequent))
    return rules


@dataclass
class MiningResult:
    rules: list
    frequent: list
    level_counts: dict  # itemset size -> number frequent

    @property
    def rule_count(self):
        return len(self.rules)


def mine(db, minsup, minconf, max_size=None):
    """Frequent itemsets then rules; the report carries per-level counts."""
    frequent = frequent_itemsets(db, minsup, max_size)
    rules = generate_rules(frequent, minconf)
    levels = {}
    for it in frequent:
        levels[len(it.items)] = levels.get(len(it.items), 0) + 1
    return MiningResult(rules, frequent, levels)
