from .lexicon import Lexicon, load_lexicon, related_words
from .numbers import number_to_words
from .tagger import TAGSET, TaggedSentence, detect_entities, lemmatize, pos_tag, tag_text
from .tokenize import Token, detokenize, join_words, split_sentences, tokenize

__all__ = [
    "Lexicon", "TAGSET", "TaggedSentence", "Token", "detect_entities", "detokenize", "join_words",
    "lemmatize", "load_lexicon", "number_to_words", "pos_tag", "related_words", "split_sentences",
    "tag_text", "tokenize",
]
