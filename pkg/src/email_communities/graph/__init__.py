"""UW-Graph construction from the interaction ledger."""
