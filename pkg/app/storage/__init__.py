from app.storage.local_storage import LocalStorage, storage

__all__ = ["LocalStorage", "storage"]
