"""comlex: typed feature-value lexicon toolkit.

Parses and prints the parenthesized entry notation, models
subcategorization frames, queries corpora for concordance lines, and
scores multi-annotator lexicons against gold-tagged instances.
"""

__version__ = "0.1.0"
