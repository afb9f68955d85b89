"""triagekit: an end-to-end support-request triage engine.

Condenses customer conversations to short extractive summaries, predicts
whether a request should be escalated to the development team, drafts the
developer ticket (title, rewritten content, priority, assignee), and
serves a human-in-the-loop review workflow with timing analytics.
"""

__version__ = "0.1.0"

PIPELINE_VERSION = __version__
