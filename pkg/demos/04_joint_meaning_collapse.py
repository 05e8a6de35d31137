"""Joint meaning across speakers, and the collapse of incompatible readings.

Two speakers who grouped the same elementary context differently produce
frameworks whose projectors do not commute. When both match a query equally
well, the engine refuses to pick silently: the reader collapses the tie.
"""

from folksearch import (
    Session,
    build_speaker_frameworks,
    collapse,
    frameworks_compatible,
    load_ontology,
    match_joint,
    resolve_query,
    select_compatible_subset,
)
from folksearch.errors import PendingCollapse

ontology = load_ontology(
    [
        "quality\tentity",
        "style\tquality",
        "clothing\tentity",
        "dress\tclothing",
        "shirt\tclothing",
    ]
)

collection = build_speaker_frameworks(
    {
        "marco": [("fashion", "style", "glamour")],
        "wendy": [("fashion", "style", "glamour"), ("fashion", "dress", "women")],
        "linus": [("tech", "shirt", "tux")],
    }
)

marco = collection.member("marco").framework
wendy = collection.member("wendy").framework
print("marco and wendy compatible?", frameworks_compatible([marco, wendy]))
print()

joint = match_joint(collection, ontology)
print("joint match pairs (statement x ontology concept):")
for pair in joint.pairs:
    print(f"  {pair.statement_id:16s} ~ {pair.concept:10s} {pair.score:.3f}")
print()

subset, choice = select_compatible_subset(collection, joint, ["style"])
print("query tags ['style'] tie two incompatible subsets:")
for option in choice.options:
    print(f"  option {option.option_id}: distinct={option.distinct_speakers} score={option.score}")
print()

session = Session(session_id="demo")
try:
    resolve_query(["style"], collection, ontology, session)
except PendingCollapse as pending:
    print("resolve paused: the reader must choose")
    womens = next(o for o in pending.choice.options if "wendy" in o.speakers)
    chosen = collapse(pending.choice, womens.option_id)
    session.decide(session.pending.key, chosen, pending.choice)
    print("reader picked:", chosen.option_id)

items = resolve_query(["style"], collection, ontology, session)
print()
print("ranked contributions after the collapse:")
for item in items:
    print(
        f"  {item.speaker_id}/{item.facet}/{item.tag}"
        f"  joint={item.joint:.2f} dr={item.rank:.3f} score={item.score:.3f}"
    )
