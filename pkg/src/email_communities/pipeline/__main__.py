"""Allow running with: python -m email_communities.pipeline"""
from email_communities.pipeline.cli import main

raise SystemExit(main())
