# springerlab/models.py

from enum import Enum

from sqlalchemy import (
    Column, Integer, String, DateTime, BigInteger, ForeignKey,
    UniqueConstraint, Index
)
from sqlalchemy.orm import relationship
from sqlalchemy.sql import func

from springerlab.utils.db import Base


# ==========================================================
# ENUMS
# ==========================================================

class RunStatus(Enum):
    RUNNING = "running"
    FINISHED = "finished"
    FAILED = "failed"


# ==========================================================
# COUNT RUN
# ==========================================================

class CountRun(Base):
    __tablename__ = "count_runs"

    id = Column(Integer, primary_key=True)
    rank_type = Column(String(10), nullable=False)
    characteristic = Column(Integer, nullable=False)
    algebra = Column(String(2), nullable=False)  # "g" or "g*"
    orbit_label = Column(String(50), nullable=False)
    q = Column(Integer, nullable=False)
    budget = Column(BigInteger)
    status = Column(String(20), default=RunStatus.RUNNING.value)
    total = Column(BigInteger)

    created_at = Column(DateTime(timezone=True), server_default=func.now())
    finished_at = Column(DateTime(timezone=True))

    chunks = relationship(
        "CountChunk",
        back_populates="run",
        cascade="all, delete-orphan"
    )

    __table_args__ = (
        Index("idx_run_lookup", "rank_type", "characteristic", "algebra", "orbit_label", "q"),
    )


# ==========================================================
# COUNT CHUNK
# ==========================================================

class CountChunk(Base):
    __tablename__ = "count_chunks"

    id = Column(Integer, primary_key=True)
    run_id = Column(Integer, ForeignKey("count_runs.id"), nullable=False)
    chunk_key = Column(String(200), nullable=False)  # "<weyl index>:<prefix codes>"
    partial_count = Column(BigInteger, nullable=False)
    checksum = Column(BigInteger, nullable=False)

    run = relationship("CountRun", back_populates="chunks")

    __table_args__ = (
        UniqueConstraint("run_id", "chunk_key", name="uq_run_chunk"),
    )
