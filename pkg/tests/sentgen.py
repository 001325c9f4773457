"""Random English sentences for property tests (templated, seeded)."""

import random

SUBJECTS = ["The cat", "A young woman", "My brother", "Two girls", "The old man", "Children", "The company",
            "Our teacher", "The small dog", "Her parents", "A tall boy", "The students", "This book",
            "The new manager", "Several farmers", "The river"]
VERBS = ["watched", "bought", "painted", "found", "cleaned", "visited", "carried", "opened", "liked",
         "sold", "cooked", "read", "built", "followed", "saw"]
OBJECTS = ["the red car", "a wooden table", "the letter", "an apple", "the garden", "a large house",
           "the window", "some bread", "the old bridge", "a blue ball", "the map", "their friends"]
ADVERBIALS = ["in the morning", "near the station", "after lunch", "on Monday", "with great care",
              "at the market", "before the storm", "in the park", "every day", "yesterday"]
ADJS = ["happy", "tired", "quiet", "busy", "cheap", "beautiful", "angry", "early", "strong"]
NUMS = ["3", "12", "45", "127", "2", "1990", "60"]
AUXS = ["is", "was", "will be", "has been", "seems"]
WH = ["When", "Where", "Why", "How"]


def random_sentence(rng: random.Random) -> str:
    kind = rng.randrange(6)
    s, v, o, a = rng.choice(SUBJECTS), rng.choice(VERBS), rng.choice(OBJECTS), rng.choice(ADVERBIALS)
    if kind == 0:
        return f"{s} {v} {o} {a}."
    if kind == 1:
        return f"{s} {rng.choice(AUXS)} {rng.choice(ADJS)}."
    if kind == 2:
        return f"{s} {v} {rng.choice(NUMS)} apples {a}."
    if kind == 3:
        return f"{rng.choice(WH)} did {s[0].lower() + s[1:]} {v.rstrip('d') if v.endswith('ed') else v} {o}?"
    if kind == 4:
        return f"{s} {v} {o} and {rng.choice(SUBJECTS).lower()} {rng.choice(VERBS)} {rng.choice(OBJECTS)}."
    return f"{a[0].upper() + a[1:]}, {s[0].lower() + s[1:]} {v} {o}."


def random_text(rng: random.Random, max_sentences=3) -> str:
    return " ".join(random_sentence(rng) for _ in range(rng.randint(1, max_sentences)))


def random_corpus(n, seed=0, max_sentences=3):
    rng = random.Random(seed)
    return [random_text(rng, max_sentences) for _ in range(n)]


def random_dataset(n, seed=0, tasks=("MT", "AS", "QG", "DG", "IC", "D2T")):
    """``n`` samples cycling through ``tasks``; AS gets multi-sentence texts."""
    from pertcheck.perturb import Sample

    rng = random.Random(seed)
    out = []
    for i in range(n):
        task = tasks[i % len(tasks)]
        text = random_text(rng, 4) if task == "AS" else random_sentence(rng)
        context = None
        if task == "DG":
            context = [{"speaker": "bot", "text": random_sentence(rng)}, {"speaker": "user", "text": random_sentence(rng)}]
        out.append(Sample(f"{task.lower()}-{i:05d}", task, context, (text,)))
    return out
