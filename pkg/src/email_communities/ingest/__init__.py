"""Mailbox ingestion: message files or CSV logs to EmailRecord values."""
