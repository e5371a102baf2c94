"""Android-to-iOS translation pipeline.

Stages: static analysis of the source tree, knowledge-base indexing,
dependency-ordered planning, prompt-driven translation through a pluggable
backend, multi-stage validation with bounded refinement, and metrics /
taxonomy reporting. See the README for the CLI entry points.
"""

__version__ = "0.1.0"
