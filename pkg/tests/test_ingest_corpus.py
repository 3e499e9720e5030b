import json

import pytest

from email_communities.errors import MissingArtifact, UnreadablePath
from email_communities.ingest.corpus import dedupe, parse_iso_utc, scan_corpus
from email_communities.ingest.export import load_records, write_diagnostics, write_records
from email_communities.schema import is_canonical
from tests.corpus_fixture import OWNER, OWNER_ALIAS, build_corpus

CSV_HEADER = "message_id,sender,to,cc,bcc,timestamp\n"


@pytest.fixture
def corpus(tmp_path):
    root = tmp_path / "maildir"
    manifest = build_corpus(root)
    return root, manifest


class TestMaildirScan:
    def test_counts_match_manifest(self, corpus):
        root, manifest = corpus
        records, diagnostics = scan_corpus(root)
        assert len(records) == manifest.parsed
        assert diagnostics.parsed_count == manifest.parsed
        assert diagnostics.skipped_count == manifest.skipped
        assert diagnostics.duplicate_count == manifest.duplicates
        assert diagnostics.scanned_count == manifest.total_files

    def test_skip_reasons(self, corpus):
        root, manifest = corpus
        _, diagnostics = scan_corpus(root)
        assert diagnostics.skip_reasons == manifest.reasons

    def test_addresses_are_canonical(self, corpus):
        root, _ = corpus
        records, _ = scan_corpus(root)
        for record in records:
            assert is_canonical(record.sender)
            assert all(is_canonical(a) for a in record.recipients)

    def test_both_owner_aliases_present(self, corpus):
        root, _ = corpus
        records, _ = scan_corpus(root)
        senders = {r.sender for r in records}
        assert OWNER in senders and OWNER_ALIAS in senders

    def test_sorted_by_timestamp_then_id(self, corpus):
        root, _ = corpus
        records, _ = scan_corpus(root)
        keys = [(r.timestamp, r.message_id) for r in records]
        assert keys == sorted(keys)

    def test_message_ids_unique(self, corpus):
        root, _ = corpus
        records, _ = scan_corpus(root)
        ids = [r.message_id for r in records]
        assert len(ids) == len(set(ids))

    def test_deterministic(self, corpus):
        root, _ = corpus
        first, d1 = scan_corpus(root)
        second, d2 = scan_corpus(root)
        assert first == second
        assert d1 == d2

    def test_worker_count_does_not_change_output(self, corpus):
        root, _ = corpus
        serial, d1 = scan_corpus(root, workers=1)
        parallel, d4 = scan_corpus(root, workers=4)
        assert serial == parallel
        assert d1 == d4

    def test_hidden_files_ignored(self, corpus):
        root, manifest = corpus
        (root / ".DS_Store").write_bytes(b"\x00\x01garbage")
        _, diagnostics = scan_corpus(root)
        assert diagnostics.scanned_count == manifest.total_files

    def test_missing_root(self, tmp_path):
        with pytest.raises(UnreadablePath):
            scan_corpus(tmp_path / "nope")

    def test_plain_file_is_not_a_corpus(self, tmp_path):
        path = tmp_path / "mail.txt"
        path.write_text("From: a@x.com\n")
        with pytest.raises(UnreadablePath):
            scan_corpus(path)

    def test_empty_directory(self, tmp_path):
        records, diagnostics = scan_corpus(tmp_path)
        assert records == []
        assert diagnostics.scanned_count == 0


class TestCsvScan:
    def _write(self, tmp_path, body: str):
        path = tmp_path / "log.csv"
        path.write_text(CSV_HEADER + body, encoding="utf-8")
        return path

    def test_basic_row(self, tmp_path):
        path = self._write(tmp_path, "m1,A@X.com,b@y.com;C@y.com,,,2002-01-14T16:00:00Z\n")
        records, diagnostics = scan_corpus(path)
        assert diagnostics.parsed_count == 1
        record = records[0]
        assert record.sender == "a@x.com"
        assert record.to == ["b@y.com", "c@y.com"]
        assert record.timestamp.isoformat() == "2002-01-14T16:00:00+00:00"

    def test_offset_converted(self, tmp_path):
        path = self._write(tmp_path, "m1,a@x.com,b@y.com,,,2002-01-14T08:00:00-08:00\n")
        records, _ = scan_corpus(path)
        assert records[0].timestamp.hour == 16

    def test_skip_reasons(self, tmp_path):
        path = self._write(tmp_path, (
            "m1,,b@y.com,,,2002-01-14T16:00:00Z\n"
            "m2,a@x.com,,,,2002-01-14T16:00:00Z\n"
            "m3,a@x.com,b@y.com,,,2002-01-14T16:00:00\n"
            "m4,a@x.com,b@y.com,,,2002-01-14T16:00:00Z\n"
            "m4,a@x.com,b@y.com,,,2002-01-14T16:00:00Z\n"
        ))
        records, diagnostics = scan_corpus(path)
        assert [r.message_id for r in records] == ["m4"]
        assert diagnostics.skip_reasons == {
            "MissingSender": 1,
            "NoRecipients": 1,
            "UnparsableDate": 1,
            "Duplicate": 1,
        }
        assert diagnostics.duplicate_count == 1

    def test_malformed_row_counted(self, tmp_path):
        path = self._write(tmp_path, (
            "m1,a@x.com,b@y.com,,,2002-01-14T16:00:00Z\n"
            "m2,a@x.com,b@y.com,,,2002-01-14T16:00:00Z,extra,fields\n"
        ))
        records, diagnostics = scan_corpus(path)
        assert len(records) == 1
        assert diagnostics.skip_reasons.get("MalformedRow") == 1

    def test_missing_column(self, tmp_path):
        path = tmp_path / "log.csv"
        path.write_text("message_id,sender,to\nm1,a@x.com,b@y.com\n")
        with pytest.raises(UnreadablePath):
            scan_corpus(path)


class TestHelpers:
    def test_parse_iso_utc_requires_zone(self):
        assert parse_iso_utc("2002-01-14T16:00:00") is None
        assert parse_iso_utc("2002-01-14T16:00:00Z").utcoffset().total_seconds() == 0

    def test_dedupe_keeps_first(self, corpus):
        root, _ = corpus
        records, _ = scan_corpus(root)
        kept, dups = dedupe(records + records[:2])
        assert kept == records
        assert dups == 2


class TestExport:
    def test_records_reload_identical(self, corpus, tmp_path):
        root, _ = corpus
        records, _ = scan_corpus(root)
        path = tmp_path / "out" / "records.jsonl"
        assert write_records(records, path) == len(records)
        assert load_records(path) == records

    @pytest.mark.parametrize("line", [
        '{"message_id": "x", "sender": "Not Canonical"}',
        "not json",
        '{"message_id": "x"}',
    ])
    def test_records_invalid_line(self, corpus, tmp_path, line):
        root, _ = corpus
        records, _ = scan_corpus(root)
        path = tmp_path / "records.jsonl"
        write_records(records[:2], path)
        with open(path, "a", encoding="utf-8") as f:
            f.write("\n" + line + "\n")
        with pytest.raises(MissingArtifact, match=r"records\.jsonl:4"):
            load_records(path)

    def test_records_missing_file(self, tmp_path):
        with pytest.raises(UnreadablePath):
            load_records(tmp_path / "records.jsonl")

    def test_diagnostics_keys(self, corpus, tmp_path):
        root, manifest = corpus
        _, diagnostics = scan_corpus(root)
        path = tmp_path / "diagnostics.json"
        write_diagnostics(diagnostics, path)
        payload = json.loads(path.read_text())
        assert set(payload) == {"parsed", "skipped", "reasons", "duplicates"}
        assert payload["parsed"] == manifest.parsed
        assert list(payload["reasons"]) == sorted(payload["reasons"])
