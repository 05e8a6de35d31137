"""The full reader dialogue against the bundled fixture corpus, headless.

Reproduces the canonical session: a vague clothing query lands on the Linux
Tux shirt, refining on the fashion facet surfaces the "I love fashion" shirt,
and pivoting to the bank facet ends at the Armani shirt. A collapse choice
between the men-style and women-style readings happens along the way.
"""

from importlib import resources

from folksearch import SearchService


def show(response, limit=3):
    if response["status"] == "collapse_required":
        print("  -> collapse required:")
        for option in response["options"]:
            who = ", ".join(option["distinct_speakers"]) or ", ".join(option["speakers"])
            print(f"     [{option['option']}] {option['facet']} ({who}) score={option['score']}")
        return
    for i, result in enumerate(response["results"][:limit], start=1):
        print(f"  {i}. ({result['score']:.4f}) {result['body']}")
    print(f"  refinements: {', '.join(response['refinements'])}")


service = SearchService()
corpus = resources.files("folksearch.data").joinpath("fixture_corpus.tsv").read_text("utf-8")
snapshot_id = service.ingest_text(corpus)
print(f"ingested snapshot {snapshot_id}")
print()

sid = service.create_session("david")

print('reader: "I think I\'m searching for style clothes"')
response = service.query(sid, "I think I'm searching for style clothes")
show(response)
print()

men_option = next(o["option"] for o in response["options"] if "marco" in o["speakers"])
print(f"reader picks the men-style reading ({men_option})")
response = service.choose_collapse(sid, men_option)
show(response)
print()

print('reader: "Pity. Well, show me a different fashion styles" -> refine on fashion')
response = service.refine(sid, "fashion")
show(response)
print()

print('reader: "But I cannot use a t-shirt in a bank, I have to use a tie" -> refine on bank')
response = service.refine(sid, "bank")
show(response)
print()

view = service.session_view(sid)
print("session history:", [step["step"] for step in view["history"]])
