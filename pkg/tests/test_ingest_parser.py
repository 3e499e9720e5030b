from datetime import datetime, timezone

import pytest

from email_communities.ingest.addresses import canonicalize, extract_addresses, split_address_list
from email_communities.ingest.parser import parse_date, parse_email
from email_communities.schema import EmailRecord, SkipReason, is_canonical


def _raw(*headers: str, body: str = "Hello") -> bytes:
    return ("\n".join(headers) + "\n\n" + body + "\n").encode()


class TestCanonicalize:
    def test_lowercases_and_strips(self):
        assert canonicalize("  A@X.com ") == "a@x.com"

    def test_strips_angle_brackets(self):
        assert canonicalize("<Bob@Y.com>") == "bob@y.com"

    def test_rejects_missing_at(self):
        assert canonicalize("undisclosed") is None

    def test_rejects_two_ats(self):
        assert canonicalize("a@b@c.com") is None

    def test_rejects_inner_whitespace(self):
        assert canonicalize("a b@c.com") is None


class TestExtractAddresses:
    def test_display_name_and_bare(self):
        found = extract_addresses('Alice <A@X.com>, b@y.com, "Carol, C." <c@Y.com>')
        assert found == ["a@x.com", "b@y.com", "c@y.com"]

    def test_within_list_dedup(self):
        assert extract_addresses("b@y.com, B@Y.COM, Bee <b@y.com>") == ["b@y.com"]

    def test_invalid_entries_dropped(self):
        assert extract_addresses("undisclosed-recipients:;") == []

    def test_semicolon_list(self):
        assert split_address_list("b@y.com; C@Y.com ;;") == ["b@y.com", "c@y.com"]

    @pytest.mark.parametrize("raw", [
        "  Mixed.Case@Enron.COM ",
        '"Beck, Sally" <SALLY.BECK@ENRON.COM>',
        "Sally Beck <sally.beck@enron.com>",
        "\tsally.beck@enron.com\t",
    ])
    def test_every_form_is_canonical(self, raw):
        for address in extract_addresses(raw):
            assert is_canonical(address)
            assert address == address.strip().lower()
            assert "<" not in address and ">" not in address


class TestParseDate:
    def test_offset_converted_to_utc(self):
        parsed = parse_date("Mon, 14 Jan 2002 08:00:00 -0800")
        assert parsed == datetime(2002, 1, 14, 16, 0, 0, tzinfo=timezone.utc)

    def test_enron_trailing_zone_comment(self):
        parsed = parse_date("Mon, 14 May 2001 16:39:00 -0700 (PDT)")
        assert parsed == datetime(2001, 5, 14, 23, 39, 0, tzinfo=timezone.utc)

    def test_zoneless_is_rejected(self):
        assert parse_date("Mon, 14 Jan 2002 08:00:00") is None

    def test_garbage_is_rejected(self):
        assert parse_date("sometime last week") is None

    def test_empty_is_rejected(self):
        assert parse_date("") is None


class TestParseEmail:
    def test_basic_fields(self):
        record = parse_email(_raw(
            "Message-ID: <1@x>",
            "From: Alice <A@X.com>",
            "To: b@y.com, c@y.com",
            "Date: Mon, 14 Jan 2002 08:00:00 -0800",
        ))
        assert isinstance(record, EmailRecord)
        assert record.message_id == "<1@x>"
        assert record.sender == "a@x.com"
        assert record.to == ["b@y.com", "c@y.com"]
        assert record.cc == [] and record.bcc == []
        assert record.timestamp == datetime(2002, 1, 14, 16, 0, 0, tzinfo=timezone.utc)

    def test_missing_from(self):
        outcome = parse_email(_raw("To: b@y.com", "Date: Mon, 14 Jan 2002 08:00:00 -0800"))
        assert outcome is SkipReason.missing_sender

    def test_no_recipients(self):
        outcome = parse_email(_raw("From: a@x.com", "Date: Mon, 14 Jan 2002 08:00:00 -0800"))
        assert outcome is SkipReason.no_recipients

    def test_unparsable_date(self):
        outcome = parse_email(_raw("From: a@x.com", "To: b@y.com", "Date: soon"))
        assert outcome is SkipReason.unparsable_date

    def test_folded_header_unfolded(self):
        record = parse_email(_raw(
            "From: a@x.com",
            "To: b@y.com,\n\tc@y.com,\n  d@y.com",
            "Date: Mon, 14 Jan 2002 08:00:00 -0800",
        ))
        assert record.to == ["b@y.com", "c@y.com", "d@y.com"]

    def test_header_names_case_insensitive(self):
        record = parse_email(_raw(
            "FROM: a@x.com",
            "to: b@y.com",
            "cc: c@y.com",
            "BCC: d@y.com",
            "date: Mon, 14 Jan 2002 08:00:00 -0800",
            "message-id: <m@x>",
        ))
        assert record.message_id == "<m@x>"
        assert (record.to, record.cc, record.bcc) == (["b@y.com"], ["c@y.com"], ["d@y.com"])

    def test_bcc_only_is_enough(self):
        record = parse_email(_raw(
            "From: a@x.com", "Bcc: d@y.com", "Date: Mon, 14 Jan 2002 08:00:00 -0800",
        ))
        assert record.recipients == ["d@y.com"]

    def test_cross_list_roles_kept(self):
        record = parse_email(_raw(
            "From: a@x.com", "To: b@y.com", "Cc: B@y.com",
            "Date: Mon, 14 Jan 2002 08:00:00 -0800",
        ))
        assert record.to == ["b@y.com"] and record.cc == ["b@y.com"]
        assert record.recipients == ["b@y.com"]

    def test_body_is_ignored(self):
        record = parse_email(_raw(
            "From: a@x.com", "To: b@y.com", "Date: Mon, 14 Jan 2002 08:00:00 -0800",
            body="From: intruder@evil.com\nTo: z@z.com",
        ))
        assert record.sender == "a@x.com"
        assert record.to == ["b@y.com"]

    def test_missing_message_id_is_synthesized(self):
        headers = ("From: a@x.com", "To: c@y.com, b@y.com", "Date: Mon, 14 Jan 2002 08:00:00 -0800")
        first = parse_email(_raw(*headers))
        reordered = parse_email(_raw(headers[0], "To: b@y.com, c@y.com", headers[2]))
        assert first.message_id.startswith("<sha1:")
        # hash uses sorted recipients
        assert first.message_id == reordered.message_id

    def test_synthesized_ids_differ_by_timestamp(self):
        a = parse_email(_raw("From: a@x.com", "To: b@y.com", "Date: Mon, 14 Jan 2002 08:00:00 -0800"))
        b = parse_email(_raw("From: a@x.com", "To: b@y.com", "Date: Mon, 14 Jan 2002 08:00:01 -0800"))
        assert a.message_id != b.message_id


class TestEmailRecordInvariants:
    def test_rejects_non_canonical_sender(self):
        with pytest.raises(ValueError):
            EmailRecord(
                message_id="1", sender="Alice <a@x.com>", to=["b@y.com"],
                timestamp=datetime(2002, 1, 1, tzinfo=timezone.utc),
            )

    def test_rejects_empty_recipients(self):
        with pytest.raises(ValueError):
            EmailRecord(message_id="1", sender="a@x.com", timestamp=datetime(2002, 1, 1, tzinfo=timezone.utc))

    def test_dedupes_within_list(self):
        record = EmailRecord(
            message_id="1", sender="a@x.com", to=["b@y.com", "b@y.com", "c@y.com"],
            timestamp=datetime(2002, 1, 1, tzinfo=timezone.utc),
        )
        assert record.to == ["b@y.com", "c@y.com"]

    def test_rejects_naive_timestamp(self):
        with pytest.raises(ValueError):
            EmailRecord(message_id="1", sender="a@x.com", to=["b@y.com"], timestamp=datetime(2002, 1, 1))
