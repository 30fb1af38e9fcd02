"""
Unit tests for the checkpoint ORM models.
Uses an in-memory SQLite database to validate inserts, constraints and cascades.
"""
import unittest

from sqlalchemy import create_engine
from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import sessionmaker

from springerlab.models import Base, CountChunk, CountRun, RunStatus


class TestModels(unittest.TestCase):
    """Test suite for CountRun / CountChunk."""

    def setUp(self):
        """Create fresh in-memory SQLite database for EACH test."""
        self.engine = create_engine("sqlite:///:memory:", echo=False)
        Base.metadata.create_all(self.engine)
        Session = sessionmaker(bind=self.engine)
        self.session = Session()

    def tearDown(self):
        self.session.close()
        self.engine.dispose()

    def _run(self, **overrides):
        values = dict(rank_type="G2", characteristic=2, algebra="g", orbit_label="A1", q=4, budget=10**6)
        values.update(overrides)
        run = CountRun(**values)
        self.session.add(run)
        self.session.commit()
        return run

    def test_run_defaults_to_running(self):
        run = self._run()
        retrieved = self.session.query(CountRun).filter_by(orbit_label="A1").first()
        self.assertIsNotNone(retrieved)
        self.assertEqual(retrieved.status, RunStatus.RUNNING.value)
        self.assertIsNone(retrieved.total)
        self.assertEqual(retrieved.id, run.id)

    def test_chunks_attach_to_run(self):
        run = self._run()
        self.session.add_all([
            CountChunk(run_id=run.id, chunk_key="0:", partial_count=1, checksum=11),
            CountChunk(run_id=run.id, chunk_key="5:1.0", partial_count=3, checksum=12),
        ])
        self.session.commit()

        self.session.refresh(run)
        self.assertEqual(len(run.chunks), 2)
        self.assertEqual(sum(c.partial_count for c in run.chunks), 4)

    def test_chunk_key_unique_per_run(self):
        run = self._run()
        self.session.add(CountChunk(run_id=run.id, chunk_key="3:1", partial_count=2, checksum=1))
        self.session.commit()

        self.session.add(CountChunk(run_id=run.id, chunk_key="3:1", partial_count=2, checksum=1))
        with self.assertRaises(IntegrityError):
            self.session.commit()
        self.session.rollback()

    def test_same_key_allowed_in_other_run(self):
        first = self._run()
        second = self._run(q=8)
        self.session.add_all([
            CountChunk(run_id=first.id, chunk_key="1:", partial_count=1, checksum=1),
            CountChunk(run_id=second.id, chunk_key="1:", partial_count=1, checksum=1),
        ])
        self.session.commit()
        self.assertEqual(self.session.query(CountChunk).count(), 2)

    def test_delete_run_cascades_to_chunks(self):
        run = self._run()
        run.chunks.append(CountChunk(chunk_key="2:0", partial_count=5, checksum=9))
        self.session.commit()

        self.session.delete(run)
        self.session.commit()
        self.assertEqual(self.session.query(CountChunk).count(), 0)

    def test_finish_run(self):
        run = self._run()
        run.status = RunStatus.FINISHED.value
        run.total = 189
        self.session.commit()

        retrieved = self.session.query(CountRun).filter_by(status="finished").one()
        self.assertEqual(retrieved.total, 189)


if __name__ == "__main__":
    unittest.main()
