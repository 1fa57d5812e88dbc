from storage.run_store import DEFAULT_DB_PATH, RunStore

__all__ = ['DEFAULT_DB_PATH', 'RunStore']
