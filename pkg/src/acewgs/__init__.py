"""AceWGS: a self-hosted research assistant for water-gas-shift catalyst design.

Four features behind one rule-routed chat interface: general Q&A, article
metadata extraction through a validated query DSL, per-article retrieval-
augmented comprehension, and a theory-guided PSO inverse model.
"""

__version__ = "0.1.0"
