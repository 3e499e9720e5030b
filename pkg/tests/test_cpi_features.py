import random
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from email_communities.errors import ConfigInvalid, UnknownNode
from email_communities.features.cpi import CPI_FEATURES, FeatureMatrix, extract_cpi, normalize
from email_communities.features.export import read_feature_matrix, write_feature_matrix, write_raw_features
from email_communities.schema import CPIVector, EmailRecord, OwnerSpec

O, A, B = "o@x.com", "a@x.com", "b@x.com"
T0 = datetime(2002, 1, 14, 9, 0, tzinfo=timezone.utc)


def _rec(n, sender, to, cc=(), hours=24):
    return EmailRecord(
        message_id=f"<{n}@t>", sender=sender, to=list(to), cc=list(cc),
        timestamp=T0 + timedelta(hours=hours * n),
    )


@pytest.fixture
def records():
    # O->A, O->A, A->O, B->{O, cc A}
    return [
        _rec(0, O, [A]),
        _rec(1, O, [A]),
        _rec(2, A, [O]),
        _rec(3, B, [O], cc=[A]),
    ]


@pytest.fixture
def owner():
    return OwnerSpec(addresses={O})


def _random_records(seed: int, count: int = 40) -> list[EmailRecord]:
    rng = random.Random(seed)
    people = [O, A, B, "c@x.com", "d@x.com", "e@x.com"]
    records = []
    for n in range(count):
        to = rng.sample(people, rng.randint(1, 3))
        cc = rng.sample([p for p in people if p not in to], rng.randint(0, 2))
        records.append(_rec(n, rng.choice(people), to, cc, hours=rng.randint(1, 30)))
    return records


def _nodes_of(records: list[EmailRecord]) -> list[str]:
    return sorted({r.sender for r in records} | {a for r in records for a in r.recipients})


def _vec(**overrides) -> CPIVector:
    base = dict(sent_count=0, recv_count=0, cc_count=0, avg_recipients_sent=0.0, active_days=0, reciprocity=0.0)
    base.update(overrides)
    return CPIVector(**base)


class TestExtractCPI:
    def test_counterpart(self, records, owner):
        cpi = extract_cpi(records, owner, [A, B, O])
        a = cpi[A]
        assert a.sent_count == 1
        assert a.recv_count == 3
        assert a.cc_count == 1
        assert a.avg_recipients_sent == pytest.approx(1.0)
        assert a.reciprocity == pytest.approx(0.5)
        assert a.active_days == 4

    def test_owner(self, records, owner):
        o = extract_cpi(records, owner, [O])[O]
        assert o.sent_count == 2
        assert o.recv_count == 2
        assert o.reciprocity == 1.0

    def test_receive_only_node(self, records, owner):
        cpi = extract_cpi(records + [_rec(4, O, [A, "z@x.com"])], owner, ["z@x.com"])
        z = cpi["z@x.com"]
        assert z.sent_count == 0
        assert z.avg_recipients_sent == 0.0
        assert z.reciprocity == 0.0

    def test_avg_recipients_ignores_self(self, owner):
        cpi = extract_cpi([_rec(0, A, [A, O, B])], owner, [A])
        assert cpi[A].avg_recipients_sent == pytest.approx(2.0)

    def test_active_days_are_utc_dates(self, owner):
        same_day = [_rec(0, A, [O], hours=1), _rec(1, A, [O], hours=1)]
        assert extract_cpi(same_day, owner, [A])[A].active_days == 1

    def test_aliases_are_one_node(self):
        spec = OwnerSpec(addresses={"beck@x.com", "sally@x.com"})
        records = [_rec(0, "sally@x.com", [A]), _rec(1, A, ["beck@x.com"])]
        cpi = extract_cpi(records, spec, ["beck@x.com", A])
        assert cpi["beck@x.com"].sent_count == 1
        assert cpi["beck@x.com"].recv_count == 1
        assert cpi[A].reciprocity == pytest.approx(1.0)

    def test_unknown_node(self, records, owner):
        with pytest.raises(UnknownNode):
            extract_cpi(records, owner, ["ghost@x.com"])

    def test_order_follows_nodes(self, records, owner):
        assert list(extract_cpi(records, owner, [O, B, A])) == [O, B, A]

    @pytest.mark.parametrize("seed", range(20))
    def test_record_order_irrelevant(self, owner, seed):
        records = _random_records(seed)
        shuffled = records[:]
        random.Random(seed + 100).shuffle(shuffled)
        nodes = _nodes_of(records)
        assert extract_cpi(shuffled, owner, nodes) == extract_cpi(records, owner, nodes)


class TestCPIVector:
    def test_average_needs_sends(self):
        with pytest.raises(ValueError):
            _vec(avg_recipients_sent=2.0)

    def test_reciprocity_bounded(self):
        with pytest.raises(ValueError):
            _vec(reciprocity=1.5)

    def test_columns(self):
        assert CPI_FEATURES == (
            "sent_count", "recv_count", "cc_count", "avg_recipients_sent", "active_days", "reciprocity",
        )


class TestNormalize:
    def test_endpoints(self):
        features = normalize({A: _vec(), B: _vec(sent_count=4, avg_recipients_sent=1.0)})
        assert features.row(A)[0] == 0.0
        assert features.row(B)[0] == 1.0

    def test_constant_column_is_zero(self):
        features = normalize({n: _vec(active_days=7) for n in (A, B, O)})
        column = features.values[:, CPI_FEATURES.index("active_days")]
        assert np.all(column == 0.0)

    def test_linear(self):
        raw = {n: _vec(sent_count=s, avg_recipients_sent=1.0) for n, s in ((A, 1), (B, 2), (O, 3))}
        column = normalize(raw).values[:, 0]
        assert column.tolist() == pytest.approx([0.0, 0.5, 1.0])

    def test_range(self, records, owner):
        features = normalize(extract_cpi(records, owner, [A, B, O]))
        assert features.values.min() >= 0.0
        assert features.values.max() <= 1.0
        assert features.nodes == (A, B, O)

    @pytest.mark.parametrize("seed", range(20))
    def test_random_range_and_order(self, owner, seed):
        records = _random_records(seed)
        raw_vectors = extract_cpi(records, owner, _nodes_of(records))
        raw = np.array([v.as_row() for v in raw_vectors.values()], dtype=float)
        scaled = normalize(raw_vectors).values
        assert scaled.min() >= 0.0 and scaled.max() <= 1.0
        for f in range(len(CPI_FEATURES)):
            for i in range(len(raw)):
                for j in range(len(raw)):
                    if raw[i, f] < raw[j, f]:
                        assert scaled[i, f] < scaled[j, f]
                    elif raw[i, f] == raw[j, f]:
                        assert scaled[i, f] == scaled[j, f]

    def test_empty(self):
        with pytest.raises(ValueError):
            normalize({})


class TestFeatureMatrix:
    def test_shape_checked(self):
        with pytest.raises(ValueError):
            FeatureMatrix((A, B), np.zeros((3, len(CPI_FEATURES))))

    def test_reindex(self):
        matrix = FeatureMatrix((A, B), np.array([[0.0] * 6, [1.0] * 6]))
        swapped = matrix.reindex([B, A])
        assert swapped.nodes == (B, A)
        assert swapped.row(B).tolist() == [1.0] * 6

    def test_unknown_row(self):
        matrix = FeatureMatrix((A,), np.zeros((1, 6)))
        with pytest.raises(UnknownNode):
            matrix.row(B)
        with pytest.raises(UnknownNode):
            matrix.reindex([A, B])


class TestFeatureExport:
    def test_reload(self, records, owner, tmp_path):
        features = normalize(extract_cpi(records, owner, [A, B, O]))
        path = tmp_path / "features.csv"
        write_feature_matrix(features, path)
        loaded = read_feature_matrix(path)
        assert loaded.nodes == features.nodes
        assert loaded.columns == CPI_FEATURES
        np.testing.assert_allclose(loaded.values, features.values)

    def test_header(self, records, owner, tmp_path):
        path = tmp_path / "features_raw.csv"
        write_raw_features(extract_cpi(records, owner, [A, B, O]), path)
        header = path.read_text().splitlines()[0]
        assert header == "address," + ",".join(CPI_FEATURES)

    def test_out_of_range_rejected(self, tmp_path):
        path = tmp_path / "features.csv"
        path.write_text("address,sent_count\na@x.com,1.5\n")
        with pytest.raises(ConfigInvalid):
            read_feature_matrix(path)

    def test_missing_address_column(self, tmp_path):
        path = tmp_path / "features.csv"
        path.write_text("node,sent_count\na@x.com,0.5\n")
        with pytest.raises(ConfigInvalid):
            read_feature_matrix(path)
