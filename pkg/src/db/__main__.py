#!/usr/bin/env python3
"""
Database initialization script
Usage: python -m db
"""

from .db import get_engine


def create_tables():
    """Create all database tables"""
    engine = get_engine()
    print(f"Run history tables ready at {engine.url}")


if __name__ == "__main__":
    create_tables()
