"""Seeded synthetic bibliographies built to hit target team profiles.

A manifest names, per culture, how many papers to generate and the team
statistics they should reproduce. The generator searches (deterministically,
from the manifest seed) for team sizes and internal-author counts meeting
those targets, then writes a realized manifest next to the CSV. The realized
statistics are computed here with plain arithmetic so that they can serve as
an independent check on :mod:`teamassembly.calibration`.
"""

from __future__ import annotations

import copy
import random
from dataclasses import dataclass

from .calibration import Author, BibRecord, format_bibliography
from .params import Culture

PRESETS: dict[str, dict] = {
    # mirrors the published department profiles; counts chosen so the
    # targets are reachable exactly (187/25 = 7.48, 478/100 = 4.78, 1/25, 43/100)
    "inger": {
        "seed": 2018,
        "years": [2012, 2013, 2014, 2015, 2016, 2017],
        "cultures": {
            "basic": {"papers": 25, "mean_team_size": 7.48, "internal_fraction": 0.22,
                      "pct_2plus_internal": 4.0, "roster": 8},
            "clinical": {"papers": 100, "mean_team_size": 4.78, "internal_fraction": 0.45,
                         "pct_2plus_internal": 43.0, "roster": 13},
        },
        "cross_internal_prob": 0.1,
        "external_reuse_prob": 0.15,
    },
    "synth": {
        "seed": 50,
        "years": [2012, 2013, 2014, 2015, 2016, 2017],
        "cultures": {
            "basic": {"papers": 15, "mean_team_size": 7.2, "internal_fraction": 0.25,
                      "pct_2plus_internal": 6.67, "roster": 5},
            "clinical": {"papers": 35, "mean_team_size": 4.6, "internal_fraction": 0.4,
                         "pct_2plus_internal": 40.0, "roster": 8},
        },
        "cross_internal_prob": 0.1,
        "external_reuse_prob": 0.2,
    },
}

MAX_ATTEMPTS = 20000


@dataclass
class _Team:
    size: int
    internal: int
    two_plus: bool


def _draw_sizes(rng: random.Random, n: int, total: int) -> list[int]:
    mean_extra = max(total / n - 2.0, 0.1)
    p = 1.0 / (1.0 + mean_extra)
    sizes = []
    for _ in range(n):
        extra = 0
        while rng.random() > p:
            extra += 1
        sizes.append(2 + extra)
    diff = total - sum(sizes)
    while diff:
        i = rng.randrange(n)
        if diff > 0:
            sizes[i] += 1
            diff -= 1
        elif sizes[i] > 2:
            sizes[i] -= 1
            diff += 1
    return sizes


def _assign_internal(rng: random.Random, sizes: list[int], k: int, target: float) -> list[_Team]:
    n = len(sizes)
    chosen = set(rng.sample(range(n), k))
    teams = [_Team(s, 2 if i in chosen else 0, i in chosen) for i, s in enumerate(sizes)]
    current = sum(t.internal / t.size for t in teams)
    order = list(range(n))
    while True:
        rng.shuffle(order)
        best, best_err = None, abs(current - target)
        for i in order:
            t = teams[i]
            cap = t.size if t.two_plus else 1
            if t.internal < cap:
                err = abs(current + 1 / t.size - target)
                if err < best_err:
                    best, best_err = i, err
        if best is None:
            return teams
        teams[best].internal += 1
        current += 1 / teams[best].size


def _solve_culture(rng: random.Random, spec: dict, tol: float) -> list[_Team]:
    n = spec["papers"]
    total = round(spec["mean_team_size"] * n)
    k = round(spec["pct_2plus_internal"] / 100 * n)
    target = spec["internal_fraction"] * n
    for _ in range(MAX_ATTEMPTS):
        teams = _assign_internal(rng, _draw_sizes(rng, n, total), k, target)
        if abs(sum(t.internal / t.size for t in teams) / n - spec["internal_fraction"]) <= tol:
            return teams
    raise RuntimeError(f"could not meet targets {spec} in {MAX_ATTEMPTS} attempts")


def generate(manifest: dict, tol: float = 0.002) -> tuple[list[BibRecord], dict]:
    """Build records for ``manifest``; returns (records, realized manifest)."""
    rng = random.Random(manifest["seed"])
    years = manifest["years"]
    rosters = {
        c: [f"in_{c.tag}_{i:02d}" for i in range(manifest["cultures"][c.tag]["roster"])]
        for c in Culture
    }
    drafts = []
    for culture in Culture:
        for team in _solve_culture(rng, manifest["cultures"][culture.tag], tol):
            drafts.append((culture, team))
    rng.shuffle(drafts)

    external_pool: dict[Culture, list[str]] = {c: [] for c in Culture}
    next_external = 0
    records = []
    for idx, (culture, team) in enumerate(drafts):
        year = years[idx * len(years) // len(drafts)]
        authors: list[Author] = []
        used: set[str] = set()
        for _ in range(team.internal):
            home = culture.other if rng.random() < manifest["cross_internal_prob"] else culture
            choices = [a for a in rosters[home] if a not in used] or \
                      [a for c in Culture for a in rosters[c] if a not in used]
            aid = rng.choice(choices)
            roster_culture = Culture.BASIC if aid in rosters[Culture.BASIC] else Culture.CLINICAL
            authors.append(Author(aid, True, roster_culture))
            used.add(aid)
        for _ in range(team.size - team.internal):
            pool = [a for a in external_pool[culture] if a not in used]
            if pool and rng.random() < manifest["external_reuse_prob"]:
                aid = rng.choice(pool)
            else:
                aid = f"ext_{next_external:04d}"
                next_external += 1
                external_pool[culture].append(aid)
            authors.append(Author(aid, False, culture))
            used.add(aid)
        rng.shuffle(authors)
        records.append((year, culture, tuple(authors)))

    records.sort(key=lambda r: r[0])
    out = [BibRecord(f"p{i + 1:03d}", year, authors, culture)
           for i, (year, culture, authors) in enumerate(records)]
    return out, realize(manifest, out)


def realize(manifest: dict, records: list[BibRecord]) -> dict:
    realized = copy.deepcopy(manifest)
    stats = {}
    for culture in Culture:
        recs = [r for r in records if r.classification is culture]
        n = len(recs)
        sizes = [len(r.authors) for r in recs]
        internal = [sum(1 for a in r.authors if a.is_internal) for r in recs]
        stats[culture.tag] = {
            "team_count": n,
            "total_authors": sum(sizes),
            "avg_team_size": sum(sizes) / n,
            "avg_internal_fraction": sum(i / s for i, s in zip(internal, sizes)) / n,
            "pct_teams_with_2plus_internal": 100.0 * sum(1 for i in internal if i >= 2) / n,
        }
    per_year = {}
    for year in sorted({r.year for r in records}):
        pairs = set()
        papers = [r for r in records if r.year == year]
        for r in papers:
            ids = [a.author_id for a in r.authors]
            pairs.update(frozenset((a, b)) for a in ids for b in ids if a != b)
        per_year[str(year)] = {"papers": len(papers), "edges": len(pairs)}
    realized["realized"] = {"records": len(records), "profiles": stats, "years": per_year}
    return realized


def generate_csv(manifest: dict) -> tuple[str, dict]:
    records, realized = generate(manifest)
    return format_bibliography(records), realized
