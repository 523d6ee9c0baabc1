from __future__ import annotations

from hypothesis import strategies as st

from timeline_dfg.event_log import EventLog

ALPHABET = ["a", "b", "c", "d", "e", "register request", 'quote "x"']

activities = st.sampled_from(ALPHABET)
timestamps = st.integers(min_value=0, max_value=4_000_000_000_000)


@st.composite
def traces(draw, max_cases: int = 8, max_events: int = 10, alphabet: list[str] | None = None):
    acts = st.sampled_from(alphabet) if alphabet else activities
    n = draw(st.integers(1, max_cases))
    out = {}
    for i in range(n):
        base = draw(timestamps)
        offsets = draw(st.lists(st.integers(0, 10**10), min_size=1, max_size=max_events))
        out[f"c{i}"] = [(draw(acts), base + off) for off in offsets]
    return out


def event_logs(**kw):
    return traces(**kw).map(EventLog.from_traces)
