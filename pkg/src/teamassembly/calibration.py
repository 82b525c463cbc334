"""Empirical team profiles from co-authorship records, and their mapping to model parameters.

Input is one CSV row per (paper, author) pair::

    paper_id,year,author_id,is_internal,culture,classification

A paper's team culture is its ``classification``; authors keep their own
``culture`` tag. Internal authors stand in for incumbents and external ones
for newcomers when profiles are turned into parameters.
"""

from __future__ import annotations

import csv
import io
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, TextIO

from .params import Culture, ModelParams, format_config, validate_params

BIB_HEADER = ("paper_id", "year", "author_id", "is_internal", "culture", "classification")


@dataclass(frozen=True)
class Author:
    author_id: str
    is_internal: bool
    culture: Culture


@dataclass(frozen=True)
class BibRecord:
    paper_id: str
    year: int
    authors: tuple[Author, ...]
    classification: Culture

    @property
    def internal_count(self) -> int:
        return sum(a.is_internal for a in self.authors)


class BibliographyError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("\n".join(problems))


def parse_bibliography(source: TextIO | str) -> list[BibRecord]:
    """Parse the bibliography CSV, reporting every malformed line at once.

    Records come back in order of first appearance of their ``paper_id``.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    problems: list[str] = []
    header = next(reader, None)
    if header is None:
        raise BibliographyError(["line 1: empty input, expected header"])
    if tuple(h.strip() for h in header) != BIB_HEADER:
        raise BibliographyError([f"line 1: expected header {','.join(BIB_HEADER)}, got {','.join(header)}"])

    papers: dict[str, dict] = {}
    for row in reader:
        lineno = reader.line_num
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != len(BIB_HEADER):
            problems.append(f"line {lineno}: expected {len(BIB_HEADER)} fields, got {len(row)}")
            continue
        paper_id, year_s, author_id, internal_s, culture_s, class_s = (f.strip() for f in row)
        line_problems = []
        if not paper_id:
            line_problems.append("empty paper_id")
        if not author_id:
            line_problems.append("empty author_id")
        try:
            year = int(year_s)
        except ValueError:
            line_problems.append(f"bad year {year_s!r}")
        if internal_s not in ("0", "1"):
            line_problems.append(f"is_internal must be 0 or 1, got {internal_s!r}")
        try:
            culture = Culture.parse(culture_s)
        except ValueError:
            line_problems.append(f"unknown culture tag {culture_s!r}")
        try:
            classification = Culture.parse(class_s)
        except ValueError:
            line_problems.append(f"unknown classification tag {class_s!r}")
        if line_problems:
            problems.extend(f"line {lineno}: {p}" for p in line_problems)
            continue

        paper = papers.get(paper_id)
        if paper is None:
            paper = papers[paper_id] = {"year": year, "classification": classification,
                                        "authors": [], "ids": set()}
        elif paper["year"] != year or paper["classification"] is not classification:
            problems.append(f"line {lineno}: paper {paper_id!r} has inconsistent year/classification")
            continue
        if author_id in paper["ids"]:
            problems.append(f"line {lineno}: duplicate author {author_id!r} in paper {paper_id!r}")
            continue
        paper["ids"].add(author_id)
        paper["authors"].append(Author(author_id, internal_s == "1", culture))

    if problems:
        raise BibliographyError(problems)
    return [BibRecord(pid, p["year"], tuple(p["authors"]), p["classification"]) for pid, p in papers.items()]


def format_bibliography(records: Iterable[BibRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BIB_HEADER)
    for rec in records:
        for a in rec.authors:
            w.writerow([rec.paper_id, rec.year, a.author_id, int(a.is_internal), a.culture.tag,
                        rec.classification.tag])
    return buf.getvalue()


@dataclass(frozen=True)
class TeamProfile:
    culture: Culture
    team_count: int
    avg_team_size: float
    avg_internal_fraction: float
    pct_teams_with_2plus_internal: float


def team_profiles(records: Iterable[BibRecord]) -> dict[Culture, TeamProfile]:
    """Per-classification team statistics; a culture with no papers gets zeros."""
    records = list(records)
    if not records:
        raise ValueError("no records")
    grouped: dict[Culture, list[BibRecord]] = defaultdict(list)
    for rec in records:
        grouped[rec.classification].append(rec)
    out = {}
    for culture in Culture:
        recs = grouped.get(culture, [])
        n = len(recs)
        if n == 0:
            out[culture] = TeamProfile(culture, 0, 0.0, 0.0, 0.0)
            continue
        out[culture] = TeamProfile(
            culture=culture,
            team_count=n,
            avg_team_size=sum(len(r.authors) for r in recs) / n,
            avg_internal_fraction=sum(r.internal_count / len(r.authors) for r in recs) / n,
            pct_teams_with_2plus_internal=100.0 * sum(r.internal_count >= 2 for r in recs) / n,
        )
    return out


def profiles_to_params(profiles: Mapping[Culture, TeamProfile], defaults: ModelParams) -> ModelParams:
    """Set p_incumbent and mean_team_size per culture from the profiles; keep everything else."""
    missing = [c.tag for c in Culture if c not in profiles]
    if missing:
        raise ValueError(f"profiles missing for: {', '.join(missing)}")
    params = defaults
    for culture in Culture:
        prof = profiles[culture]
        params = params.with_culture(culture, p_incumbent=prof.avg_internal_fraction,
                                     mean_team_size=prof.avg_team_size)
    return validate_params(params)


CALIBRATION_NOTES = {
    "basic.q_repeat": "not estimable from team profiles; default kept",
    "clinical.q_repeat": "not estimable from team profiles; default kept",
}


def format_calibrated_config(params: ModelParams) -> str:
    return format_config(params, CALIBRATION_NOTES)


def format_profiles(profiles: Mapping[Culture, TeamProfile]) -> str:
    lines = [f"{'culture':<10}{'teams':>7}{'avg_size':>10}{'internal':>10}{'2+internal%':>13}"]
    for culture in Culture:
        p = profiles[culture]
        lines.append(f"{culture.tag:<10}{p.team_count:>7}{p.avg_team_size:>10.4f}"
                     f"{p.avg_internal_fraction:>10.4f}{p.pct_teams_with_2plus_internal:>13.2f}")
    return "\n".join(lines) + "\n"


# -- year slices and export ---------------------------------------------------

Edge = tuple[str, str, int]


def slice_by_year(records: Iterable[BibRecord]) -> dict[int, list[Edge]]:
    """Co-author edges per year, weighted by the number of shared papers that year."""
    weights: dict[int, dict[tuple[str, str], int]] = defaultdict(lambda: defaultdict(int))
    for rec in records:
        ids = sorted(a.author_id for a in rec.authors)
        year = weights[rec.year]
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                year[a, b] += 1
    return {year: sorted((a, b, w) for (a, b), w in pairs.items()) for year, pairs in sorted(weights.items())}


def author_cultures(records: Iterable[BibRecord]) -> dict[str, Culture]:
    """First-seen culture tag per author."""
    out: dict[str, Culture] = {}
    for rec in records:
        for a in rec.authors:
            out.setdefault(a.author_id, a.culture)
    return out


_DOT_ID = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _dot_id(x: str) -> str:
    if _DOT_ID.match(x):
        return x
    return '"' + x.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_edges(edges: Iterable[tuple], fmt: str = "edge-csv",
                 cultures: Mapping[str, Culture | str] | None = None) -> str:
    """Serialize an undirected weighted edge list deterministically.

    ``edge-csv`` writes ``source,target,weight``; ``dot`` writes a graph
    description with a ``culture`` attribute on every node that has one.
    """
    norm = sorted((min(str(a), str(b)), max(str(a), str(b)), int(w)) for a, b, w in edges)
    if fmt == "edge-csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["source", "target", "weight"])
        w.writerows(norm)
        return buf.getvalue()
    if fmt == "dot":
        cultures = cultures or {}
        nodes = sorted({a for a, _, _ in norm} | {b for _, b, _ in norm} | {str(k) for k in cultures})
        lines = ["graph collaboration {"]
        for n in nodes:
            c = cultures.get(n)
            if c is None:
                lines.append(f"  {_dot_id(n)};")
            else:
                tag = c.tag if isinstance(c, Culture) else str(c)
                lines.append(f"  {_dot_id(n)} [culture={_dot_id(tag)}];")
        for a, b, wt in norm:
            lines.append(f"  {_dot_id(a)} -- {_dot_id(b)} [weight={wt}];")
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {fmt!r} (expected 'edge-csv' or 'dot')")
