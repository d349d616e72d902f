"""Reading and writing game instances as structured text (JSON).

One format serves both question kinds: a recount input carries the optional
``manipulation`` block, an attacker input leaves it out.  Serialization is
canonical (candidates and districts in declared order, all object keys
sorted, zero counts omitted), so it round-trips byte-identically.  The formal
schema ships with the package, see :func:`schema_path`.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Optional

from .errors import ValidationError
from .model import District, Election, Manipulation, ensure_valid


def schema_path() -> str:
    """Filesystem path of the JSON schema describing the instance format."""
    return str(resources.files("recountgame").joinpath("schema/instance.schema.json"))


def _expect(condition, message):
    if not condition:
        raise ValidationError(message)


def _votes_vector(payload, candidates, where):
    _expect(isinstance(payload, dict), f"{where}: votes must be an object")
    index = {name: i for i, name in enumerate(candidates)}
    votes = [0] * len(candidates)
    for name, count in payload.items():
        _expect(name in index, f"{where}.{name}: unknown candidate")
        _expect(isinstance(count, int) and not isinstance(count, bool), f"{where}.{name}: count must be an integer")
        _expect(count >= 0, f"{where}.{name}: count must be non-negative")
        votes[index[name]] = count
    return tuple(votes)


def parse_instance(text: str):
    """Parse instance text into ``(Election, Manipulation | None)``.

    Raises :class:`ValidationError` with a line-precise message on malformed
    JSON and a field-path message on any semantic violation.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    _expect(isinstance(payload, dict), "top level: expected an object")
    known = {
        "rule",
        "candidates",
        "tiebreak",
        "preferred",
        "budget_attacker",
        "budget_defender",
        "districts",
        "manipulation",
    }
    for key in payload:
        _expect(key in known, f"top level: unknown key {key!r}")
    for key in ("rule", "candidates", "tiebreak", "budget_attacker", "budget_defender", "districts"):
        _expect(key in payload, f"top level: missing key {key!r}")

    candidates = payload["candidates"]
    _expect(
        isinstance(candidates, list) and all(isinstance(c, str) for c in candidates),
        "candidates: expected a list of names",
    )
    tiebreak_names = payload["tiebreak"]
    _expect(
        isinstance(tiebreak_names, list) and sorted(tiebreak_names) == sorted(candidates),
        "tiebreak: expected a permutation of the candidate names",
    )
    tiebreak = tuple(candidates.index(name) for name in tiebreak_names)

    preferred = None
    if payload.get("preferred") is not None:
        name = payload["preferred"]
        _expect(name in candidates, f"preferred: unknown candidate {name!r}")
        preferred = candidates.index(name)

    raw_districts = payload["districts"]
    _expect(isinstance(raw_districts, list) and raw_districts, "districts: expected a non-empty list")
    districts = []
    for i, entry in enumerate(raw_districts):
        where = f"districts[{i}]"
        _expect(isinstance(entry, dict), f"{where}: expected an object")
        for key in entry:
            _expect(key in {"weight", "gamma", "votes"}, f"{where}: unknown key {key!r}")
        _expect("votes" in entry, f"{where}: missing votes")
        votes = _votes_vector(entry["votes"], candidates, f"{where}.votes")
        weight = entry.get("weight", 1)
        gamma = entry.get("gamma", 0)
        for field, value in (("weight", weight), ("gamma", gamma)):
            _expect(
                isinstance(value, int) and not isinstance(value, bool),
                f"{where}.{field}: must be an integer",
            )
        districts.append(District(votes=votes, weight=weight, gamma=gamma))

    for field in ("budget_attacker", "budget_defender"):
        _expect(
            isinstance(payload[field], int) and not isinstance(payload[field], bool),
            f"{field}: must be an integer",
        )

    election = Election(
        rule=payload["rule"],
        candidates=tuple(candidates),
        districts=tuple(districts),
        tiebreak=tiebreak,
        budget_attacker=payload["budget_attacker"],
        budget_defender=payload["budget_defender"],
        preferred=preferred,
    )

    manipulation = None
    if payload.get("manipulation") is not None:
        raw = payload["manipulation"]
        _expect(isinstance(raw, list), "manipulation: expected a list")
        entries = {}
        for j, entry in enumerate(raw):
            where = f"manipulation[{j}]"
            _expect(isinstance(entry, dict), f"{where}: expected an object")
            for key in entry:
                _expect(key in {"index", "votes"}, f"{where}: unknown key {key!r}")
            _expect("index" in entry and "votes" in entry, f"{where}: needs index and votes")
            idx = entry["index"]
            _expect(
                isinstance(idx, int) and 0 <= idx < len(districts),
                f"{where}.index: must be a district index in [0, {len(districts) - 1}]",
            )
            _expect(idx not in entries, f"{where}.index: district {idx} listed twice")
            entries[idx] = _votes_vector(entry["votes"], candidates, f"{where}.votes")
        manipulation = Manipulation(entries)
        ensure_valid(election, manipulation)
    return election, manipulation


def load_instance(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_instance(handle.read())


def _votes_payload(candidates, votes):
    return {name: count for name, count in zip(candidates, votes) if count}


def serialize_instance(election: Election, manipulation: Optional[Manipulation] = None) -> str:
    """Canonical text for an instance; identical inputs give identical bytes."""
    payload = {
        "rule": election.rule,
        "candidates": list(election.candidates),
        "tiebreak": [election.candidates[c] for c in election.tiebreak],
        "budget_attacker": election.budget_attacker,
        "budget_defender": election.budget_defender,
        "districts": [
            {
                "weight": d.weight,
                "gamma": d.gamma,
                "votes": _votes_payload(election.candidates, d.votes),
            }
            for d in election.districts
        ],
    }
    if election.preferred is not None:
        payload["preferred"] = election.candidates[election.preferred]
    if manipulation is not None:
        payload["manipulation"] = [
            {"index": i, "votes": _votes_payload(election.candidates, votes)}
            for i, votes in manipulation.items()
        ]
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
