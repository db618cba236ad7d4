from hypothesis import strategies as st

from cubeflow.diagram import from_braid


@st.composite
def braid_words(draw, strands=3, max_len=7):
    """Braid words using every generator, so the closure diagram is connected."""
    gens = [g for k in range(1, strands) for g in (k, -k)]
    word = draw(st.lists(st.sampled_from(gens), min_size=strands - 1, max_size=max_len))
    if {abs(g) for g in word} != set(range(1, strands)):
        word = list(range(1, strands)) + word[strands - 1:]
    return word


@st.composite
def braid_diagrams(draw, strands=3, max_len=7):
    return from_braid(draw(braid_words(strands, max_len)), strands)
